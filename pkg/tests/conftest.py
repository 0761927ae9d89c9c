import pytest

from bisetloops.groups import make_catalog_group


@pytest.fixture(scope="session")
def c2():
    return make_catalog_group("C2")


@pytest.fixture(scope="session")
def s3():
    return make_catalog_group("S3")
