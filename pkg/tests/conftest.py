from pathlib import Path

import pytest

import evocar
from evocar.dataset import Attribute, Dataset, validate

DATA = Path(evocar.__file__).parent / "data"


def data_path(name: str) -> Path:
    return DATA / name


def make_dataset(names, rows, class_name) -> Dataset:
    """Build a small categorical dataset directly from string rows."""
    schema = []
    for j, name in enumerate(names):
        values = tuple(dict.fromkeys(row[j] for row in rows))
        schema.append(Attribute(name, "categorical", values, is_class=name == class_name))
    return validate(Dataset(tuple(schema), tuple(tuple(row) for row in rows)))


@pytest.fixture(scope="session")
def liver_raw():
    return evocar.load_csv(data_path("liver.csv"), "selector")


@pytest.fixture(scope="session")
def liver_disc(liver_raw):
    return evocar.discretize(liver_raw, 3)


@pytest.fixture(scope="session")
def weather_raw():
    return evocar.load_csv(data_path("weather.csv"), "play")


@pytest.fixture(scope="session")
def lens_raw():
    return evocar.load_csv(data_path("lens.csv"), "lenses")


@pytest.fixture(scope="session")
def balloon_raw():
    return evocar.load_csv(data_path("balloon.csv"), "inflated")
