import json

import numpy as np

from legarray import arrays, correlation, images
from legarray.cli import main

from reference_data import FLATTENED_S1, SEQ_P17, THETA_S1


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGenLegendre:
    def test_p17_matches_reference(self, capsys):
        code, out, _ = run(capsys, "gen-legendre", "--p", "17")
        assert code == 0
        arr = arrays.deserialize(out)
        assert np.array_equal(arr.values, SEQ_P17)

    def test_byte_identical_across_runs(self, capsys):
        _, out1, _ = run(capsys, "gen-legendre", "--p", "5", "--n", "2")
        _, out2, _ = run(capsys, "gen-legendre", "--p", "5", "--n", "2")
        assert out1 == out2

    def test_writes_file(self, capsys, tmp_path):
        target = tmp_path / "seq.nda"
        code, out, _ = run(capsys, "gen-legendre", "--p", "3", "--out", str(target))
        assert code == 0 and out == ""
        assert arrays.deserialize(target.read_text()).values.tolist() == [0, 1, -1]

    def test_explicit_poly(self, capsys):
        code, out, _ = run(
            capsys, "gen-legendre", "--p", "3", "--n", "2", "--poly", "2,2,1"
        )
        assert code == 0
        assert arrays.deserialize(out).dims == (3, 3)

    def test_invalid_p_exits_1(self, capsys):
        code, _, err = run(capsys, "gen-legendre", "--p", "9")
        assert code == 1
        assert "error" in err


class TestGenFamily:
    def test_writes_all_members(self, capsys, tmp_path):
        out_dir = tmp_path / "fam"
        code, _, _ = run(
            capsys, "gen-family", "--p", "3", "--n", "2", "--poly", "2,2,1",
            "--out", str(out_dir),
        )
        assert code == 0
        names = sorted(f.name for f in out_dir.iterdir())
        assert names == ["S_0.nda", "S_1.nda", "S_2.nda"]

    def test_single_member_matches_library(self, capsys, tmp_path, family_3_2):
        out_dir = tmp_path / "fam"
        run(capsys, "gen-family", "--p", "3", "--n", "2", "--poly", "2,2,1",
            "--m", "1", "--out", str(out_dir))
        arr = arrays.deserialize((out_dir / "S_1.nda").read_text())
        assert arr == family_3_2[1].arr


class TestCorr:
    def test_table_matches_library(self, capsys, tmp_path, family_3_2):
        a_path = tmp_path / "a.nda"
        a_path.write_text(arrays.serialize(family_3_2[1].arr))
        out_path = tmp_path / "theta.nda"
        code, _, _ = run(capsys, "corr", str(a_path), str(a_path), "--out", str(out_path))
        assert code == 0
        table = arrays.deserialize(out_path.read_text())
        assert np.array_equal(table.values, THETA_S1)

    def test_fast_flag_gives_same_table(self, capsys, tmp_path, family_3_2):
        a_path = tmp_path / "a.nda"
        a_path.write_text(arrays.serialize(family_3_2[1].arr))
        out1, out2 = tmp_path / "t1.nda", tmp_path / "t2.nda"
        run(capsys, "corr", str(a_path), str(a_path), "--out", str(out1))
        run(capsys, "corr", str(a_path), str(a_path), "--fast", "--out", str(out2))
        assert out1.read_text() == out2.read_text()

    def test_missing_file_exits_1(self, capsys, tmp_path):
        code, _, err = run(capsys, "corr", str(tmp_path / "nope.nda"),
                           str(tmp_path / "nope.nda"), "--out", "-")
        assert code == 1

    def test_dims_mismatch_exits_1(self, capsys, tmp_path, family_3_2):
        a_path = tmp_path / "a.nda"
        b_path = tmp_path / "b.nda"
        a_path.write_text(arrays.serialize(family_3_2[1].arr))
        b_path.write_text("NDA1\n1\n3\nternary\n0 1 -1\n")
        code, _, err = run(capsys, "corr", str(a_path), str(b_path), "--out", "-")
        assert code == 1
        assert "mismatch" in err


class TestVerify:
    def test_reference_instance_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "--p", "3", "--n", "2", "--poly", "2,2,1")
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert report["p"] == 3 and report["n"] == 2
        assert report["poly"] == "2,2,1"
        assert len(report["theorem1"]) == 3
        assert len(report["theorem2"]) == 3
        assert report["m_zero_passed"] is True
        assert report["welch"]["relative_difference"]["fraction"] == "13/32"

    def test_default_poly_recorded(self, capsys):
        code, out, _ = run(capsys, "verify", "--p", "3", "--n", "2")
        assert code == 0
        assert json.loads(out)["poly"] == "2,1,1"

    def test_fast_matches_naive(self, capsys):
        _, out1, _ = run(capsys, "verify", "--p", "3", "--n", "2")
        _, out2, _ = run(capsys, "verify", "--p", "3", "--n", "2", "--fast")
        assert out1 == out2

    def test_out_flag_writes_report_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "verify", "--p", "3", "--n", "2", "--out", str(target))
        assert code == 0
        assert json.loads(target.read_text())["passed"] is True

    def test_failed_check_exits_2(self, capsys, monkeypatch):
        import legarray.cli as cli_mod

        real_verify = correlation.verify_autocorrelation

        def fake_verify(member, method="naive"):
            report = real_verify(member, method=method)
            return correlation.CorrelationReport(**{**report.__dict__, "passed": False})

        monkeypatch.setattr(cli_mod.correlation, "verify_autocorrelation", fake_verify)
        code, out, _ = run(capsys, "verify", "--p", "3", "--n", "2")
        assert code == 2
        assert json.loads(out)["passed"] is False


class TestWelch:
    def test_prints_exact_ratios(self, capsys):
        code, out, _ = run(capsys, "welch", "--p", "3", "--n", "2")
        assert code == 0
        assert "10/64" in out
        assert "1/9" in out
        assert "13/32" in out


class TestFlattenRender:
    def test_flatten_reference(self, capsys, tmp_path, family_3_2):
        src = tmp_path / "s1.nda"
        src.write_text(arrays.serialize(family_3_2[1].arr))
        dst = tmp_path / "flat.nda"
        code, _, _ = run(capsys, "flatten", str(src), "--out", str(dst))
        assert code == 0
        assert np.array_equal(arrays.deserialize(dst.read_text()).values, FLATTENED_S1)

    def test_render_flattens_and_maps(self, capsys, tmp_path, family_3_2):
        src = tmp_path / "s1.nda"
        src.write_text(arrays.serialize(family_3_2[1].arr))
        dst = tmp_path / "s1.pgm"
        code, _, _ = run(capsys, "render", str(src), "--out", str(dst))
        assert code == 0
        img = images.read_pgm(dst.read_bytes())
        assert (img.width, img.height) == (9, 9)
        expected = np.full((9, 9), 128, dtype=np.uint8)
        expected[FLATTENED_S1 == 1] = 0
        expected[FLATTENED_S1 == -1] = 255
        assert np.array_equal(img.pixels, expected)

    def test_render_scale(self, capsys, tmp_path, family_3_2):
        src = tmp_path / "s1.nda"
        src.write_text(arrays.serialize(family_3_2[1].arr))
        dst = tmp_path / "s1.pgm"
        run(capsys, "render", str(src), "--out", str(dst), "--scale", "4")
        img = images.read_pgm(dst.read_bytes())
        assert (img.width, img.height) == (36, 36)


class TestWatermarkCommands:
    def test_embed_extract_round_trip(self, capsys, tmp_path):
        carrier = tmp_path / "in.pgm"
        carrier.write_bytes(
            images.write_pgm(images.GrayImage(np.full((27, 27), 128, dtype=np.uint8)))
        )
        marked = tmp_path / "marked.pgm"
        code, _, _ = run(
            capsys, "embed", "--image", str(carrier), "--p", "3", "--n", "2",
            "--poly", "2,2,1", "--m", "1", "--shifts", "1,2,0,1",
            "--strength", "3", "--out", str(marked),
        )
        assert code == 0
        code, out, _ = run(
            capsys, "extract", "--image", str(marked), "--p", "3", "--n", "2",
            "--poly", "2,2,1",
        )
        assert code == 0
        result = json.loads(out)
        assert result["m"] == 1
        assert result["shifts"] == [1, 2, 0, 1]
        assert result["confident"] is True

    def test_embed_validates_shifts(self, capsys, tmp_path):
        carrier = tmp_path / "in.pgm"
        carrier.write_bytes(
            images.write_pgm(images.GrayImage(np.full((27, 27), 128, dtype=np.uint8)))
        )
        code, _, err = run(
            capsys, "embed", "--image", str(carrier), "--p", "3", "--n", "2",
            "--m", "1", "--shifts", "1,2", "--out", str(tmp_path / "x.pgm"),
        )
        assert code == 1


class TestUsage:
    def test_unknown_subcommand_exits_1(self, capsys):
        assert run(capsys, "frobnicate")[0] == 1

    def test_unknown_flag_exits_1(self, capsys):
        assert run(capsys, "welch", "--p", "3", "--n", "2", "--bogus")[0] == 1

    def test_help_exits_0(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_bad_poly_string_exits_1(self, capsys):
        code, _, err = run(capsys, "gen-legendre", "--p", "3", "--n", "2", "--poly", "a,b")
        assert code == 1
