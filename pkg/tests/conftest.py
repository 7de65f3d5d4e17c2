import pytest

from netdesign import Dataset, DatasetSpec, generate_dataset
from tests.factories import DatasetSpecFactory, NonlinearDatasetSpecFactory


@pytest.fixture(scope="session")
def linear_spec() -> DatasetSpec:
    return DatasetSpecFactory(name="linear", seed=7)


@pytest.fixture(scope="session")
def linear_dataset(linear_spec: DatasetSpec) -> Dataset:
    return generate_dataset(linear_spec)


@pytest.fixture(scope="session")
def nonlinear_dataset() -> Dataset:
    return generate_dataset(NonlinearDatasetSpecFactory(name="nonlinear", seed=11))
