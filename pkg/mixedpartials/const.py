import math

two_pi = 2 * math.pi

# Smallest admissible grid along each axis
min_grid_points = 2
min_stencil_points = 3

default_tolerances = {
    "spectral": 1e-8,
    "quadrature": 1e-2,
}

parseval_rel_tol = 1e-10
row_zero_tol = 1e-10
boundary_flat_tol = 1e-10
hermitian_residual_tol = 1e-9
hermitian_check_tol = 1e-12

# Coefficient entries at or below this modulus are omitted from coefficient JSON
coeff_json_threshold = 1e-15

csv_float_format = "%.17g"
grid_csv_columns = ["x", "y", "value"]

holder_exhaustive_limit = 4096
holder_random_pairs = 200000
holder_slack = 1e-9
default_seed = 20240101

default_window = 3

fat_cantor_max_levels = 24

# Distance, in units of the zigzag half-period, under which x counts as a break node
break_node_tol = 1e-9

bump_scan_points = 10**4

cli_defaults = {
    "nx": 64,
    "ny": 64,
    "nmax": 8,
    "mmax": None,
    "levels": 6,
    "terms": 8,
    "removal": 1.0,
    "holder_samples": 4096,
}

pathology_kinds = ("thm51", "thm52")

derivative_names = ("f", "fx", "fy", "fxx", "fyy", "fxy")

# AnalyticFunction2D attribute for each derivative name
derivative_attributes = {
    "f": "eval",
    "fx": "d_x",
    "fy": "d_y",
    "fxx": "d_xx",
    "fyy": "d_yy",
    "fxy": "d_xy",
}
