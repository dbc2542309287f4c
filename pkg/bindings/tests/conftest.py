from __future__ import annotations

import json
import subprocess

import pytest

from crskit_pipeline import _cli_argv


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [*_cli_argv(), *args], capture_output=True, text=True
    )


def gen_fixture(out_dir, *, preset=None, profile=None) -> str:
    args = ["gen-fixtures", "--out", str(out_dir)]
    if preset:
        args += ["--preset", preset]
    else:
        args += ["--profile", json.dumps(profile)]
    proc = run_cli(*args)
    assert proc.returncode == 0, proc.stderr
    return str(out_dir)


@pytest.fixture(scope="session")
def replicas(tmp_path_factory) -> dict[str, str]:
    base = tmp_path_factory.mktemp("replicas")
    names = ["sod4sb-replica", "mscoco-replica", "randompeople-replica", "tiktok-replica"]
    return {name: gen_fixture(base / name, preset=name) for name in names}
