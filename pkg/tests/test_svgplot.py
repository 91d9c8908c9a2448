"""Shape and determinism of the hand-written SVG scatter output."""

import math

import pytest

from anosovcert.svgplot import scatter_fit_svg


def test_svg_structure():
    svg = scatter_fit_svg([1, 2, 3], [0.5, 1.0, 1.6], alpha=0.5, c=0.0,
                          title="growth")
    assert svg.startswith('<svg xmlns="http://www.w3.org/2000/svg"')
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == 3
    assert ">growth</text>" in svg
    assert "word length" in svg
    assert 'stroke="#c62828"' in svg  # the fitted line
    assert "y = 0.5 x - 0" in svg


def test_svg_skips_nonfinite_points():
    svg = scatter_fit_svg([1, 2, 3, 4], [0.5, math.nan, 1.6, math.inf],
                          alpha=0.5, c=0.0, title="t")
    assert svg.count("<circle") == 2


def test_svg_rejects_empty_data():
    with pytest.raises(ValueError):
        scatter_fit_svg([], [], alpha=0.0, c=0.0, title="t")
    with pytest.raises(ValueError):
        scatter_fit_svg([1, 2], [math.nan, math.nan], alpha=0.0, c=0.0,
                        title="t")


def test_svg_is_deterministic():
    args = ([1, 2, 3, 5, 8], [0.3, 0.9, 1.4, 2.5, 4.4], 0.55, 0.21)
    a = scatter_fit_svg(*args[:2], alpha=args[2], c=args[3], title="run")
    b = scatter_fit_svg(*args[:2], alpha=args[2], c=args[3], title="run")
    assert a == b


def test_svg_custom_labels():
    svg = scatter_fit_svg([1], [1.0], alpha=1.0, c=0.0, title="t",
                          xlabel="steps", ylabel="log gap")
    assert ">steps</text>" in svg
    assert ">log gap</text>" in svg
