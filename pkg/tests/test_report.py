import csv
import io
from pathlib import Path

from decset.dataset import binarize, parse_csv
from decset.learner import learn
from decset.report import STATS_FIELDS, stats_rows, write_report, write_stats_csv

DATE = (Path(__file__).parent / "data" / "date.csv").read_text()


def test_stats_rows_and_figures(tmp_path):
    data, bmap = binarize(parse_csv(DATE))
    model, report = learn(data, bmap, objective="literals", symmetry_breaking=False)
    rows = stats_rows(report, model)
    assert [(r["class"], r["terms"], r["cover_cost"], r["rules"], r["literals"]) for r in rows] == [
        ("No", 4, 2, 2, 2), ("Yes", 4, 2, 1, 2)]
    buf = io.StringIO()
    write_stats_csv(rows, buf)
    assert next(csv.reader(io.StringIO(buf.getvalue()))) == STATS_FIELDS
    paths = write_report(report, model, tmp_path / "out")
    assert [Path(p).name for p in paths] == ["stats.csv", "term_sizes.png", "phase_times.png"]
    assert all(Path(p).stat().st_size > 0 for p in paths)
