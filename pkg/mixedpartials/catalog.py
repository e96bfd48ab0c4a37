import numpy as np

from mixedpartials import const
from mixedpartials.grid import AnalyticFunction2D
from mixedpartials.pathology import (
    build_fat_cantor,
    construct_thm51,
    construct_thm52,
    rescale_to_2pi,
)
from mixedpartials.verify import apply_window, make_window

names = ("sinsin", "sin", "windowed-mix", "thm51", "thm52")


def sinsin():
    return AnalyticFunction2D(
        eval=lambda x, y: np.sin(x) * np.sin(y),
        d_x=lambda x, y: np.cos(x) * np.sin(y),
        d_y=lambda x, y: np.sin(x) * np.cos(y),
        d_xx=lambda x, y: -np.sin(x) * np.sin(y),
        d_yy=lambda x, y: -np.sin(x) * np.sin(y),
        d_xy=lambda x, y: np.cos(x) * np.cos(y),
    )


def sin():
    """``sin x``, constant in y."""
    return AnalyticFunction2D(
        eval=lambda x, y: np.sin(x) + 0 * y,
        d_x=lambda x, y: np.cos(x) + 0 * y,
        d_y=lambda x, y: 0 * x * y,
        d_xx=lambda x, y: -np.sin(x) + 0 * y,
        d_yy=lambda x, y: 0 * x * y,
        d_xy=lambda x, y: 0 * x * y,
    )


def mix():
    """``sin 2x cos y + cos x sin 3y``."""
    return AnalyticFunction2D(
        eval=lambda x, y: np.sin(2 * x) * np.cos(y) + np.cos(x) * np.sin(3 * y),
        d_x=lambda x, y: 2 * np.cos(2 * x) * np.cos(y) - np.sin(x) * np.sin(3 * y),
        d_y=lambda x, y: -np.sin(2 * x) * np.sin(y) + 3 * np.cos(x) * np.cos(3 * y),
        d_xx=lambda x, y: -4 * np.sin(2 * x) * np.cos(y) - np.cos(x) * np.sin(3 * y),
        d_yy=lambda x, y: -np.sin(2 * x) * np.cos(y) - 9 * np.cos(x) * np.sin(3 * y),
        d_xy=lambda x, y: -2 * np.cos(2 * x) * np.sin(y)
        - 3 * np.sin(x) * np.cos(3 * y),
    )


def windowed_mix(window=const.default_window):
    return apply_window(mix(), make_window(window))


def build_function(
    name,
    levels=const.cli_defaults["levels"],
    terms=const.cli_defaults["terms"],
    removal=const.cli_defaults["removal"],
):
    """Look up a built-in function by name.

    :param str name: one of :data:`names`.
    :param int levels: fat Cantor levels, series functions only.
    :param int terms: number of series terms, series functions only.
    :param float removal: removal fraction, series functions only.
    :return: (*mixedpartials.grid.AnalyticFunction2D*) -- the function on [0, 2π)².
    :raises ValueError: if the name is unknown.
    """
    if name not in names:
        raise ValueError(f"unknown function {name!r}, choose from {', '.join(names)}")
    if name == "thm51":
        return rescale_to_2pi(construct_thm51(build_fat_cantor(levels, removal), terms))
    if name == "thm52":
        return rescale_to_2pi(construct_thm52(build_fat_cantor(levels, removal), terms))
    return {"sinsin": sinsin, "sin": sin, "windowed-mix": windowed_mix}[name]()
