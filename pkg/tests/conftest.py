import json
from importlib import resources

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMAS = ("verify", "consistency", "spectrum", "well", "diagram", "table")


def _load(name):
    text = resources.files("topotunnel").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


@pytest.fixture(scope="session")
def validate():
    registry = Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(_load(name))) for name in SCHEMAS
    )

    def check(obj, name):
        Draft202012Validator(_load(name), registry=registry).validate(obj)
        return True

    return check


ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
