import shutil
import zipfile

import numpy as np
import pytest

from specgraph import (
    BadArchiveError,
    ChecksumMismatchError,
    DownloadError,
    IngestError,
    class_bias,
    fetch_dataset,
    parse_tu_dataset,
    write_tu_dataset,
)
from specgraph.tu import canonical_dataset_name

from conftest import make_synth_dataset


class TestParse:
    def test_minimal_dataset(self, minimal_tu_dir):
        ds = parse_tu_dataset(minimal_tu_dir, "MINI")
        assert ds.n_graphs == 2
        assert ds.n_classes == 2
        assert np.array_equal(ds.labels, [0, 1])  # -1 -> 0, +1 -> 1 by raw order
        assert ds.raw_label_map == {-1: 0, 1: 1}
        assert ds.graphs[0].n_nodes == 3
        assert ds.graphs[0].n_edges == 3
        assert ds.graphs[1].n_nodes == 2
        assert ds.graphs[1].n_edges == 1
        assert ds.avg_nodes == pytest.approx(2.5)
        assert ds.avg_edges == pytest.approx((6 + 2) / 2)  # both-direction count

    def test_whitespace_and_blank_lines_tolerated(self, tmp_path):
        d = tmp_path / "W"
        d.mkdir()
        (d / "W_A.txt").write_text("1 ,  2\n2,1\n\n\n")
        (d / "W_graph_indicator.txt").write_text("1\n 1 \n\n")
        (d / "W_graph_labels.txt").write_text("7\n")
        ds = parse_tu_dataset(d, "W")
        assert ds.n_graphs == 1
        assert ds.graphs[0].n_edges == 1
        assert ds.raw_label_map == {7: 0}

    def test_missing_file_reports_path(self, tmp_path):
        with pytest.raises(IngestError, match="missing"):
            parse_tu_dataset(tmp_path, "NOPE")

    def test_non_integer_token_reports_file_and_line(self, minimal_tu_dir):
        path = minimal_tu_dir / "MINI_graph_indicator.txt"
        path.write_text("1\n1\nbogus\n2\n2\n")
        with pytest.raises(IngestError) as exc_info:
            parse_tu_dataset(minimal_tu_dir, "MINI")
        assert exc_info.value.line_no == 3
        assert "MINI_graph_indicator.txt" in exc_info.value.path

    def test_cross_graph_edge_reports_line(self, minimal_tu_dir):
        path = minimal_tu_dir / "MINI_A.txt"
        text = path.read_text() + "1, 4\n"
        path.write_text(text)
        with pytest.raises(IngestError) as exc_info:
            parse_tu_dataset(minimal_tu_dir, "MINI")
        assert exc_info.value.line_no == 9
        assert "connects graphs" in str(exc_info.value)

    def test_edge_node_out_of_range(self, minimal_tu_dir):
        path = minimal_tu_dir / "MINI_A.txt"
        path.write_text(path.read_text() + "1, 99\n")
        with pytest.raises(IngestError) as exc_info:
            parse_tu_dataset(minimal_tu_dir, "MINI")
        assert exc_info.value.line_no == 9

    def test_malformed_pair(self, minimal_tu_dir):
        (minimal_tu_dir / "MINI_A.txt").write_text("1 2\n")
        with pytest.raises(IngestError, match="expected 'i, j'"):
            parse_tu_dataset(minimal_tu_dir, "MINI")

    def test_roundtrip(self, tmp_path):
        ds = make_synth_dataset(n_per_class=5)
        write_tu_dataset(ds, tmp_path / "SYNTH")
        back = parse_tu_dataset(tmp_path / "SYNTH", "SYNTH")
        assert back.n_graphs == ds.n_graphs
        assert back.n_classes == ds.n_classes
        assert np.array_equal(back.labels, ds.labels)
        assert back.avg_nodes == pytest.approx(ds.avg_nodes)
        assert back.avg_edges == pytest.approx(ds.avg_edges)
        for g_in, g_out in zip(ds.graphs, back.graphs):
            assert g_in.n_nodes == g_out.n_nodes
            assert np.array_equal(g_in.edges, g_out.edges)


class TestClassBias:
    def test_formula(self):
        ds = make_synth_dataset(n_per_class=5)
        assert class_bias(ds) == pytest.approx(50.0)

    def test_two_thirds(self):
        ds = make_synth_dataset(n_per_class=3)
        object.__setattr__(ds, "labels", np.array([0, 0, 1]))
        object.__setattr__(ds, "graphs", ds.graphs[:3])
        assert class_bias(ds) == pytest.approx(66.7, abs=0.05)

    def test_two_to_one(self, minimal_tu_dir):
        ds = parse_tu_dataset(minimal_tu_dir, "MINI")
        assert class_bias(ds) == pytest.approx(50.0)

    def test_dominant_class(self):
        ds = make_synth_dataset(n_per_class=3)
        labels = np.array([0, 0, 1, 1, 1, 1])
        object.__setattr__(ds, "labels", labels)
        assert class_bias(ds) == pytest.approx(100 * 4 / 6)


def _make_archive(tmp_path, name="MINIZ", extra_member=None):
    src = tmp_path / "src" / name
    src.mkdir(parents=True)
    (src / f"{name}_A.txt").write_text("1, 2\n2, 1\n3, 4\n4, 3\n")
    (src / f"{name}_graph_indicator.txt").write_text("1\n1\n2\n2\n")
    (src / f"{name}_graph_labels.txt").write_text("0\n1\n")
    archive = tmp_path / f"{name}.zip"
    with zipfile.ZipFile(archive, "w") as zf:
        for f in sorted(src.iterdir()):
            zf.write(f, arcname=f"{name}/{f.name}")
        if extra_member:
            zf.writestr(*extra_member)
    return archive


class TestFetch:
    def test_download_unpack_and_cache_hit(self, tmp_path):
        archive = _make_archive(tmp_path)
        cache = tmp_path / "cache"
        template = f"file://{tmp_path}/{{name}}.zip"
        path = fetch_dataset("MINIZ", cache, template)
        assert (path / "MINIZ_A.txt").is_file()
        lock = (cache / "checksums.lock").read_text()
        assert "MINIZ.zip" in lock
        # cache hit: breaking the source must not matter
        archive.unlink()
        again = fetch_dataset("MINIZ", cache, template)
        assert again == path
        ds = parse_tu_dataset(path, "MINIZ")
        assert ds.n_graphs == 2

    def test_network_failure_is_download_error(self, tmp_path):
        with pytest.raises(DownloadError):
            fetch_dataset("MINIZ", tmp_path / "cache",
                          f"file://{tmp_path}/missing/{{name}}.zip")

    def test_checksum_mismatch_leaves_cache_untouched(self, tmp_path):
        _make_archive(tmp_path)
        cache = tmp_path / "cache"
        cache.mkdir()
        (cache / "checksums.lock").write_text("MINIZ.zip " + "0" * 64 + "\n")
        template = f"file://{tmp_path}/{{name}}.zip"
        with pytest.raises(ChecksumMismatchError):
            fetch_dataset("MINIZ", cache, template)
        assert not (cache / "archives" / "MINIZ.zip").exists()
        assert not (cache / "MINIZ").exists()

    def test_corrupted_cached_archive_detected(self, tmp_path):
        _make_archive(tmp_path)
        cache = tmp_path / "cache"
        template = f"file://{tmp_path}/{{name}}.zip"
        fetch_dataset("MINIZ", cache, template)
        # corrupt the cached archive and force re-extraction
        (cache / "archives" / "MINIZ.zip").write_bytes(b"garbage")
        shutil.rmtree(cache / "MINIZ")
        with pytest.raises(ChecksumMismatchError):
            fetch_dataset("MINIZ", cache, template)

    def test_manually_placed_archive_gets_pinned(self, tmp_path):
        archive = _make_archive(tmp_path)
        cache = tmp_path / "cache"
        (cache / "archives").mkdir(parents=True)
        shutil.copy(archive, cache / "archives" / "MINIZ.zip")
        # no download happens, so a dead URL template must not matter
        path = fetch_dataset("MINIZ", cache, "file:///nonexistent/{name}.zip")
        assert (path / "MINIZ_A.txt").is_file()
        assert "MINIZ.zip" in (cache / "checksums.lock").read_text()

    def test_malformed_archive(self, tmp_path):
        bad = tmp_path / "BADZ.zip"
        bad.write_bytes(b"this is not a zip")
        with pytest.raises(BadArchiveError):
            fetch_dataset("BADZ", tmp_path / "cache", f"file://{tmp_path}/{{name}}.zip")

    def test_archive_missing_expected_files(self, tmp_path):
        archive = tmp_path / "EMPTYZ.zip"
        with zipfile.ZipFile(archive, "w") as zf:
            zf.writestr("EMPTYZ/readme.txt", "nothing here")
        with pytest.raises(BadArchiveError, match="did not contain"):
            fetch_dataset("EMPTYZ", tmp_path / "cache",
                          f"file://{tmp_path}/{{name}}.zip")

    def test_zip_slip_rejected(self, tmp_path):
        archive = _make_archive(tmp_path, extra_member=("../evil.txt", "pwned"))
        cache = tmp_path / "cache"
        with pytest.raises(BadArchiveError, match="escapes"):
            fetch_dataset("MINIZ", cache, f"file://{tmp_path}/{{name}}.zip")
        assert not (tmp_path / "evil.txt").exists()


def test_aliases_resolve():
    assert canonical_dataset_name("MT") == "MUTAG"
    assert canonical_dataset_name("PTC") == "PTC_MR"
    assert canonical_dataset_name("EZ") == "ENZYMES"
    assert canonical_dataset_name("PF") == "PROTEINS_full"
    assert canonical_dataset_name("NCI1") == "NCI1"
    assert canonical_dataset_name("MUTAG") == "MUTAG"
