import textwrap

import pytest

SURPLUS_TOML = textwrap.dedent(
    """
    [experiment]
    kind = "surplus"
    replications = 2
    base_seed = 7

    [surplus]
    samples = 2000
    """
)

FINALITY_TOML = textwrap.dedent(
    """
    [experiment]
    kind = "finality_monotonicity"
    base_seed = 1

    [sweep]
    finality_q_values = [0.1, 0.3, 0.45]
    finality_max_depth = 30
    """
)


@pytest.fixture
def surplus_toml(tmp_path):
    path = tmp_path / "surplus.toml"
    path.write_text(SURPLUS_TOML, encoding="utf-8")
    return path


@pytest.fixture
def finality_toml(tmp_path):
    path = tmp_path / "finality.toml"
    path.write_text(FINALITY_TOML, encoding="utf-8")
    return path
