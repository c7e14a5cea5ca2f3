import pytest

from superbider import catalog


@pytest.fixture(scope="session")
def vir_key():
    return catalog.key("virasoro")


@pytest.fixture(scope="session")
def svir_key():
    return catalog.key("svir-ramond")


@pytest.fixture(scope="session")
def base_reports():
    """One full verification pass at the case-default windows, shared by the
    acceptance assertions."""
    from superbider.verifier import verify_all

    return {r.case_id: r for r in verify_all()}


@pytest.fixture(scope="session")
def grown_reports():
    """The same pass with every window enlarged by two units of N."""
    from superbider.verifier import verify_all

    return {r.case_id: r for r in verify_all(grow=2)}
