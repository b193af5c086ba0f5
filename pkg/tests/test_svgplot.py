import numpy as np

from hybridmirror.svgplot import line_plot


def test_line_plot_deterministic(tmp_path):
    x = np.linspace(0.0, 1.0, 50)
    series = [("a", np.sin(x)), ("b", np.cos(x))]
    p1 = tmp_path / "a.svg"
    p2 = tmp_path / "b.svg"
    line_plot(str(p1), x, series, "t", "x", "y")
    line_plot(str(p2), x, series, "t", "x", "y")
    assert p1.read_bytes() == p2.read_bytes()


def test_line_plot_structure(tmp_path):
    x = np.linspace(0.0, 2.0, 20)
    path = tmp_path / "p.svg"
    line_plot(str(path), x, [("one", x), ("two", 2.0 * x), ("three", x * x)],
              "title text", "xlab", "ylab")
    svg = path.read_text()
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 3
    for label in ("title text", "xlab", "ylab", "one", "two", "three"):
        assert label in svg


def test_line_plot_flat_series(tmp_path):
    # constant data must not divide by a zero value range
    x = np.linspace(0.0, 1.0, 5)
    path = tmp_path / "flat.svg"
    line_plot(str(path), x, [("const", np.full(5, 0.5))], "t", "x", "y")
    assert path.read_text().count("<polyline") == 1
