import json
import os
import pathlib
import subprocess

import jsonschema
import pytest
from referencing import Registry, Resource

ROOT = pathlib.Path(__file__).resolve().parents[2]
BIN = str(pathlib.Path(os.environ.get("IET_BIN", ROOT / "build" / "tools" / "iet")).resolve())
SCHEMAS = pathlib.Path(os.environ.get("IET_SCHEMAS", ROOT / "schemas"))


def _load(name):
    with open(SCHEMAS / name) as f:
        return json.load(f)


@pytest.fixture(scope="session")
def validator():
    manifest = _load("manifest.schema.json")
    result = _load("result.schema.json")
    registry = Registry().with_resources(
        [(s["$id"], Resource.from_contents(s)) for s in (manifest, result)]
    )
    return {
        "manifest": jsonschema.Draft202012Validator(manifest, registry=registry),
        "result": jsonschema.Draft202012Validator(result, registry=registry),
    }


@pytest.fixture
def iet(tmp_path):
    def run(*args, check=None):
        proc = subprocess.run([BIN, *args], cwd=tmp_path, capture_output=True, text=True, timeout=600)
        if check is not None:
            assert proc.returncode == check, proc.stderr
        return proc

    run.dir = tmp_path
    return run


def read_json(path):
    with open(path) as f:
        return json.load(f)
