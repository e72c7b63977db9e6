from concurrent.futures import ProcessPoolExecutor

import pytest

from walkval.bfile import BFileError, parse_bfile, parse_bfile_text
from walkval.cache import CacheFormatError, SequenceCache


def test_put_get(tmp_path):
    c = SequenceCache(tmp_path / "c.tsv")
    assert c.put_many([("W", "4", 1, 8), ("W", "4", 2, 168)]) == 2
    assert c.put_many([("W", "4", 1, 8)]) == 0
    assert c.get("W", "4", 2) == 168 and c.get("W", "4", 3) is None
    assert len(c) == 2
    with pytest.raises(ValueError):
        c.put_many([("W", "4", 1, 9)])
    with pytest.raises(ValueError):
        c.put_many([("Q", "4", 1, 9)])


def test_summary_and_clear(tmp_path):
    c = SequenceCache(tmp_path / "c.tsv")
    c.put_many([("Wstar", "3", n, n + 1) for n in range(5)] + [("Domb", "", 0, 1)])
    assert c.summary() == [("Domb", "", 1, 0), ("Wstar", "3", 5, 4)]
    c.clear()
    assert len(c) == 0 and c.path.exists()


def test_corrupt_cache(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("# header\nW\t4\tx\t1\n")
    with pytest.raises(CacheFormatError) as info:
        len(SequenceCache(path))
    assert info.value.line_no == 2


def _writer(args):
    path, start = args
    c = SequenceCache(path)
    for n in range(start, start + 50):
        c.put_many([("U", "1,1", n, n * n)])
    return True


def test_concurrent_appends(tmp_path):
    path = str(tmp_path / "c.tsv")
    with ProcessPoolExecutor(4) as pool:
        assert all(pool.map(_writer, [(path, 0), (path, 25), (path, 50), (path, 75)]))
    c = SequenceCache(path)
    assert len(c) == 125
    assert all(c.get("U", "1,1", n) == n * n for n in range(125))


def test_bfile_parse():
    entries = parse_bfile_text("# comment\n\n0 1\n1 4\n2  28\n")
    assert [(e.line_no, e.n, e.value) for e in entries] == [(3, 0, 1), (4, 1, 4), (5, 2, 28)]


@pytest.mark.parametrize("text,line", [
    ("0 1\n1\n", 2),
    ("0 1\n1 x\n", 2),
    ("0 1\n0 1\n", 2),
    ("0 1 2\n", 1),
])
def test_bfile_errors(text, line):
    with pytest.raises(BFileError) as info:
        parse_bfile_text(text)
    assert info.value.line_no == line
    assert str(info.value).startswith(f"line {line}:")


def test_bfile_missing(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_bfile(tmp_path / "nope.txt")
