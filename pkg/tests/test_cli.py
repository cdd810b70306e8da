"""Command-line interface: subcommand wiring, exit codes, and output
files byte-identical to the library pipeline."""

from __future__ import annotations

import json

import pytest

from movi import (
    ScenarioSpec,
    compile_scene,
    encode_scene,
    generate,
    parse_recording,
    serialize_recording,
)
from movi.cli import main

FOREIGN_MAP = """\
t=time_s
px=x
py=y
pz=z
qx=rx
qy=ry
qz=rz
qw=rw
entity=tracker
entity:LeftHand=left_hand
time_scale=0.001
position_scale=0.01
source=lab import
"""

FOREIGN_CSV = """\
time_s,tracker,x,y,z,rx,ry,rz,rw
0,LeftHand,10,90,0,0,0,0,1
10,LeftHand,11,90,0,0,0,0,1
20,LeftHand,12,91,1,0,0,0,1
"""

SINGLE_SAMPLE = (
    "t,entity,kind,px,py,pz,qx,qy,qz,qw\n"
    "0.0,right_hand,hand,0.0,1.0,0.0,0.0,0.0,0.0,1.0\n"
)


def _gen_file(tmp_path, name="rec.csv", kind="toss", extra=()):
    out = tmp_path / name
    code = main(["gen", kind, "--rate", "30", "--out", str(out), *extra])
    assert code == 0
    return out


class TestUsageErrors:
    def test_no_arguments(self, capsys):
        assert main([]) == 1
        err = capsys.readouterr().err
        assert "usage" in err
        assert "error:" in err

    def test_unknown_subcommand(self, capsys):
        assert main(["dance"]) == 1

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "usage" in capsys.readouterr().out

    def test_subcommand_help_exits_zero(self, capsys):
        assert main(["scene", "--help"]) == 0
        assert "--density" in capsys.readouterr().out

    def test_missing_required_out(self, capsys, tmp_path):
        assert main(["gen", "toss"]) == 1

    def test_unknown_flag(self, capsys, tmp_path):
        assert main(["gen", "toss", "--out", str(tmp_path / "x"),
                     "--volume", "11"]) == 1


class TestGen:
    def test_writes_canonical_recording(self, tmp_path):
        out = _gen_file(tmp_path)
        want = serialize_recording(generate(ScenarioSpec(kind="toss", rate=30.0)))
        assert out.read_bytes() == want

    def test_deterministic_across_runs(self, tmp_path):
        a = _gen_file(tmp_path, "a.csv", extra=("--seed", "7"))
        b = _gen_file(tmp_path, "b.csv", extra=("--seed", "7"))
        assert a.read_bytes() == b.read_bytes()

    def test_all_kinds(self, tmp_path):
        for kind in ("pickup", "toss", "draw"):
            out = _gen_file(tmp_path, f"{kind}.csv", kind=kind)
            rec = parse_recording(out.read_bytes())
            assert rec.meta.source == f"gen:{kind}"

    def test_noise_flag(self, tmp_path):
        clean = _gen_file(tmp_path, "clean.csv")
        noisy = _gen_file(tmp_path, "noisy.csv",
                          extra=("--noise-sigma", "0.01", "--seed", "3"))
        assert clean.read_bytes() != noisy.read_bytes()

    def test_duration_flag(self, tmp_path):
        out = _gen_file(tmp_path, extra=("--duration", "2.0"))
        rec = parse_recording(out.read_bytes())
        assert rec.time_span() == (0.0, 2.0)

    def test_invalid_kind_is_usage_error(self, capsys, tmp_path):
        assert main(["gen", "juggle", "--out", str(tmp_path / "x")]) == 1

    def test_bad_rate_is_data_error(self, capsys, tmp_path):
        assert main(["gen", "toss", "--rate", "0",
                     "--out", str(tmp_path / "x")]) == 2
        assert "rate" in capsys.readouterr().err


class TestIngest:
    def test_canonicalizes_respellings(self, tmp_path):
        src = _gen_file(tmp_path, "src.csv")
        canonical = src.read_bytes()
        respelled = canonical.replace(b"0.0,", b"0e0,", 3)
        messy = tmp_path / "messy.csv"
        messy.write_bytes(respelled)
        out = tmp_path / "clean.csv"
        assert main(["ingest", str(messy), "--out", str(out)]) == 0
        assert out.read_bytes() == canonical

    def test_idempotent_on_canonical_input(self, tmp_path):
        src = _gen_file(tmp_path)
        out = tmp_path / "again.csv"
        assert main(["ingest", str(src), "--out", str(out)]) == 0
        assert out.read_bytes() == src.read_bytes()

    def test_column_map(self, tmp_path):
        foreign = tmp_path / "foreign.csv"
        foreign.write_text(FOREIGN_CSV)
        cfg = tmp_path / "map.cfg"
        cfg.write_text(FOREIGN_MAP)
        out = tmp_path / "canon.csv"
        assert main(["ingest", str(foreign), "--map", str(cfg),
                     "--out", str(out)]) == 0
        rec = parse_recording(out.read_bytes())
        assert [t.entity_id for t in rec.tracks] == ["left_hand"]
        assert rec.track("left_hand").samples[0].position == (0.1, 0.9, 0.0)
        assert rec.meta.source == "lab import"

    def test_missing_input_is_data_error(self, capsys, tmp_path):
        missing = tmp_path / "nope.csv"
        assert main(["ingest", str(missing), "--out",
                     str(tmp_path / "x")]) == 2
        assert "nope.csv" in capsys.readouterr().err

    def test_invalid_recording_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text(SINGLE_SAMPLE)
        assert main(["ingest", str(bad), "--out", str(tmp_path / "x")]) == 2
        assert "too_few_samples" in capsys.readouterr().err


class TestScene:
    def test_compiles_matching_library_bytes(self, tmp_path):
        src = _gen_file(tmp_path)
        out = tmp_path / "doc.scene.json"
        assert main(["scene", str(src), "--density", "0.5", "--smooth", "3",
                     "--out", str(out)]) == 0
        rec = parse_recording(src.read_bytes())
        want = encode_scene(compile_scene(rec, density=0.5, smooth_window=3))
        assert out.read_bytes() == want

    def test_layer_subset_staging(self, tmp_path):
        src = _gen_file(tmp_path)
        out = tmp_path / "gm.scene.json"
        assert main(["scene", str(src), "--layers", "gm",
                     "--out", str(out)]) == 0
        payload = json.loads(out.read_bytes())
        assert payload["staging"] == [["gm"]]
        assert list(payload["layers"]) == ["gm"]

    def test_missing_input_names_path(self, capsys, tmp_path):
        missing = tmp_path / "absent.csv"
        assert main(["scene", str(missing), "--out",
                     str(tmp_path / "x")]) == 2
        assert "absent.csv" in capsys.readouterr().err

    @pytest.mark.parametrize("flags", [
        ("--density", "2.0"),
        ("--density", "0"),
        ("--density", "abc"),
        ("--smooth", "2"),
        ("--smooth", "-3"),
        ("--smooth", "x"),
        ("--layers", "gm,haze"),
        ("--layers", ""),
    ])
    def test_bad_flag_values_are_usage_errors(self, capsys, tmp_path, flags):
        src = _gen_file(tmp_path)
        code = main(["scene", str(src), *flags, "--out", str(tmp_path / "x")])
        assert code == 1
        assert "error:" in capsys.readouterr().err

    def test_invalid_recording_is_data_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text(SINGLE_SAMPLE)
        assert main(["scene", str(bad), "--out", str(tmp_path / "x")]) == 2


class TestServe:
    def test_bad_port_is_usage_error(self, capsys):
        assert main(["serve", "--port", "abc"]) == 1

    def test_unusable_store_is_data_error(self, capsys, tmp_path):
        blocker = tmp_path / "occupied"
        blocker.write_text("file in the way")
        assert main(["serve", "--store", str(blocker)]) == 2
        assert "error:" in capsys.readouterr().err
