import copy
import json
from fractions import Fraction

import pytest

from natorder.catalog.formulas import (
    enumerate_minimality,
    kronecker,
    quadratic_discriminant,
    quartic_cyclic_discriminant,
    smallest_prime_norms,
)
from natorder.catalog.setups import (
    ENV_VAR,
    SETUP_IDS,
    CatalogError,
    code_rate,
    default_catalog_path,
    load_catalog,
    serialize,
)
from natorder.factored import Factored


@pytest.fixture
def raw_doc():
    with open(default_catalog_path()) as fh:
        return json.load(fh)


def test_catalog_lists_all_setups(catalog):
    assert catalog.ids() == list(SETUP_IDS)
    assert catalog.ids(include_extras=True)[-1] == "golden"
    assert len(catalog) == 5
    assert catalog[0].id == "Q-2"


def test_setup_shapes(catalog):
    shapes = {s.id: (s.n, s.n_r, s.n_t) for s in catalog}
    assert shapes == {
        "Q-2": (1, 2, 2),
        "Q-2-2": (2, 2, 4),
        "Qi-2-2": (2, 2, 4),
        "Qi-2-3": (2, 3, 6),
        "Qi-3-2": (3, 2, 6),
    }
    assert code_rate(catalog.get("Q-2")) == Fraction(1)
    assert code_rate(catalog.get("Qi-2-3")) == 3


def test_unknown_setup(catalog):
    with pytest.raises(CatalogError, match="unknown setup"):
        catalog.get("Q-9")


def test_serialization_is_canonical(catalog):
    with open(default_catalog_path()) as fh:
        assert serialize(catalog) == fh.read()
    again = load_catalog(serialize(catalog))
    assert again.checksum == catalog.checksum


def test_env_var_override(tmp_path, monkeypatch, raw_doc):
    raw_doc["version"] = "9.9.9"
    path = tmp_path / "alt.json"
    path.write_text(json.dumps(raw_doc))
    monkeypatch.setenv(ENV_VAR, str(path))
    cat = load_catalog()
    assert cat.version == "9.9.9"
    assert cat.source == str(path)


def test_empty_catalog_rejected():
    with pytest.raises(CatalogError):
        load_catalog({"schema": 1, "version": "0", "setups": [], "extras": []})


def test_wrong_sigma_rejected(raw_doc):
    doc = copy.deepcopy(raw_doc)
    q2 = doc["setups"][0]
    q2["fields"][0]["automorphisms"]["sigma"]["image"] = "w"
    doc["setups"] = [q2]
    with pytest.raises(CatalogError):
        load_catalog(doc)


def test_non_integral_gamma_rejected(raw_doc):
    doc = copy.deepcopy(raw_doc)
    doc["setups"] = [doc["setups"][0]]
    doc["setups"][0]["gamma"] = "1/2"
    with pytest.raises(CatalogError):
        load_catalog(doc)


def test_bad_prime_rejected(raw_doc):
    doc = copy.deepcopy(raw_doc)
    doc["setups"] = [doc["setups"][0]]
    doc["setups"][0]["fields"][0]["primes"][0]["images"] = {"w": 2}
    with pytest.raises(CatalogError):
        load_catalog(doc)


def test_claimed_values_parsed(catalog):
    q2 = catalog.get("Q-2")
    assert q2.claimed_table == Factored(36)
    assert catalog.get("Qi-2-2").claimed_table == Factored({2: 4, 17: 3})


@pytest.mark.parametrize("d, disc", [(-3, -3), (-1, -4), (2, 8), (5, 5), (-7, -7)])
def test_quadratic_discriminants(d, disc):
    assert quadratic_discriminant(d) == disc


def test_kronecker_and_prime_norms():
    assert kronecker(-4, 5) == 1 and kronecker(-4, 3) == -1 and kronecker(-4, 2) == 0
    assert smallest_prime_norms(-4) == [2, 5]
    assert smallest_prime_norms(None) == [2, 3]


def test_quartic_discriminant_of_the_winner():
    assert quartic_cyclic_discriminant(-1, 2, 1, 5) == 125


def test_quadratic_minimality():
    rep = enumerate_minimality("Q-2", 30)
    assert rep.winner.params == (-3,)
    assert rep.winner.bound == 36
    assert rep.unique
    assert all(c.bound > 36 for c in rep.rejected())


def test_quartic_minimality():
    rep = enumerate_minimality("Q-2-2", 30)
    assert rep.winner.params == (-1, 2, 1, 5)
    assert rep.winner.disc == 125
    assert rep.unique and rep.field_agrees


def test_unknown_family():
    with pytest.raises(ValueError):
        enumerate_minimality("Q-3", 10)
