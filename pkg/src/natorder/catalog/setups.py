"""Loading, validating and serializing the setup catalog.

The catalog is a JSON document. Each setup carries its own field tower
(fields are listed bottom up and refer to earlier ones by id), the
automorphisms that generate the relevant Galois groups, the primes used by
the residue tests, the non-norm element and the claimed discriminant norms.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..exactfield.field import (
    QQ,
    FieldAutomorphism,
    NumberField,
    identity_automorphism,
    is_integral,
)
from ..exactfield.parse import ParseError, format_element
from ..exactfield.residue import LocalPrimeData
from ..factored import Factored

SETUP_IDS = ("Q-2", "Q-2-2", "Qi-2-2", "Qi-2-3", "Qi-3-2")
NONNORM_KINDS = ("mod-p-obstruction", "residue-subgroup", "unit-square-argument", "composite-factor")
ENV_VAR = "CDA_CATALOG"


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Setup:
    id: str
    F: object
    n: int
    n_r: int
    n_t: int
    L: object
    E: object
    fields: dict
    sigma: FieldAutomorphism
    tau: FieldAutomorphism
    gamma: object
    claimed_table: Factored | None
    claimed_theorem: Factored | None
    claimed_rate: Fraction
    smallest_primes: tuple
    nonnorm: dict
    cited: dict
    primes: dict
    embeddings: dict
    extra: bool = False
    raw: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def gaussian(self) -> bool:
        return self.F is not QQ

    def field(self, fid: str):
        return QQ if fid == "Q" else self.fields[fid]

    def prime(self, label: str) -> LocalPrimeData:
        try:
            return self.primes[label]
        except KeyError:
            raise CatalogError(f"setup {self.id} has no prime {label!r}") from None


def code_rate(setup: Setup) -> Fraction:
    """Symbols per channel use: ``n_r`` over Q(i), ``n_r/2`` over Q."""
    return Fraction(setup.n_r) if setup.gaussian else Fraction(setup.n_r, 2)


@dataclass(frozen=True)
class Catalog:
    setups: tuple
    extras: tuple
    version: str
    checksum: str
    source: str

    def __iter__(self):
        return iter(self.setups)

    def __len__(self):
        return len(self.setups)

    def __getitem__(self, key):
        if isinstance(key, int):
            return self.setups[key]
        return self.get(key)

    def get(self, sid: str) -> Setup:
        for s in self.setups + self.extras:
            if s.id == sid:
                return s
        known = ", ".join(s.id for s in self.setups + self.extras)
        raise CatalogError(f"unknown setup {sid!r} (known: {known})")

    def ids(self, include_extras: bool = False) -> list:
        rows = self.setups + (self.extras if include_extras else ())
        return [s.id for s in rows]


# -- loading ------------------------------------------------------------------
def default_catalog_path() -> str:
    env = os.environ.get(ENV_VAR)
    if env:
        return env
    return str(resources.files("natorder.catalog").joinpath("data/catalog.json"))


def canonical_dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_catalog(source=None) -> Catalog:
    """Load a catalog from a path, a JSON string or a parsed dict.

    ``None`` picks ``$CDA_CATALOG`` or the bundled document.
    """
    label = "<dict>"
    if source is None:
        source = default_catalog_path()
    if isinstance(source, dict):
        doc = source
    else:
        text = None
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            label = str(source)
            if isinstance(source, str) and source.strip() == "":
                text = ""
            else:
                text = Path(source).read_text()
        else:
            label = "<text>"
            text = source
        if not text.strip():
            raise CatalogError("no setups: empty catalog document")
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"catalog is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise CatalogError("catalog root must be an object")
    setups_raw = doc.get("setups")
    if not setups_raw:
        raise CatalogError("no setups in catalog")
    setups = tuple(build_setup(s) for s in setups_raw)
    extras = tuple(build_setup(s, extra=True) for s in doc.get("extras", []))
    ids = [s.id for s in setups + extras]
    if len(set(ids)) != len(ids):
        raise CatalogError("duplicate setup ids")
    checksum = hashlib.sha256(canonical_dumps(doc).encode()).hexdigest()
    return Catalog(setups, extras, str(doc.get("version", "0")), checksum, label)


_REQUIRED = ("id", "F", "n", "n_r", "n_t", "L", "E", "fields", "sigma", "gamma", "claimed", "rate")
_FIELD_REQUIRED = ("id", "base", "generator", "min_poly", "integral_basis")


def _require(obj, keys, where):
    if not isinstance(obj, dict):
        raise CatalogError(f"{where} must be an object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise CatalogError(f"{where} is missing {', '.join(missing)}")


def _claimed(v):
    return None if v is None else Factored({int(p): int(e) for p, e in v.items()})


def build_setup(raw: dict, extra: bool = False) -> Setup:
    _require(raw, _REQUIRED, "setup")
    sid = raw["id"]
    n, n_r, n_t = int(raw["n"]), int(raw["n_r"]), int(raw["n_t"])
    if n < 1 or n_r < 1:
        raise CatalogError(f"{sid}: n and n_r must be positive")
    if n_t != n * n_r:
        raise CatalogError(f"{sid}: n_t = {n_t} but n*n_r = {n * n_r}")

    fields: dict = {}
    auts: dict = {}
    primes: dict = {}
    embeddings: dict = {}

    def lookup(fid):
        if fid == "Q":
            return QQ
        if fid not in fields:
            raise CatalogError(f"{sid}: unresolvable field reference {fid!r}")
        return fields[fid]

    for fr in raw["fields"]:
        _require(fr, _FIELD_REQUIRED, f"{sid} field")
        base = lookup(fr["base"])
        fid = fr["id"]
        if fid in fields or fid == "Q":
            raise CatalogError(f"{sid}: duplicate field id {fid!r}")
        try:
            mp = [base.coerce(c) for c in fr["min_poly"]]
            k = NumberField(fid, base, mp, fr["generator"])
            fields[fid] = k
            k.set_integral_basis([k.coerce(b) for b in fr["integral_basis"]])
        except (ParseError, ValueError, ArithmeticError) as exc:
            raise CatalogError(f"{sid}: field {fid}: {exc}") from None
        if "embedding" in fr:
            embeddings[fr["generator"]] = tuple(fr["embedding"])
        for name, spec in sorted(fr.get("automorphisms", {}).items()):
            below = spec.get("restricts_to")
            base_aut = None
            if below is not None:
                base_aut = auts.get((fr["base"], below))
                if base_aut is None:
                    raise CatalogError(f"{sid}: {fid}.{name} restricts to unknown {below!r}")
            aut = FieldAutomorphism(k, k.coerce(spec["image"]), base_aut, name)
            if not aut.is_valid():
                raise CatalogError(f"{sid}: {fid}.{name} is not a field automorphism")
            auts[(fid, name)] = aut
        for pr in fr.get("primes", []):
            label = pr["label"]
            if label in primes:
                raise CatalogError(f"{sid}: duplicate prime label {label!r}")
            gen = pr.get("generator")
            data = LocalPrimeData(
                label=label,
                field=k,
                p=int(pr["p"]),
                modulus=tuple(int(c) for c in pr["modulus"]),
                images={g: int(v) for g, v in pr["images"].items()},
                ramification_index=int(pr.get("ramification_index", 1)),
                extension_degree=int(pr.get("extension_degree", 1)),
                generator=None if gen is None else k.coerce(gen),
                notes=pr.get("notes", ""),
            )
            if not data.is_valid():
                raise CatalogError(f"{sid}: prime {label} has inconsistent residues")
            if data.generator is not None and data.reduce(data.generator) != 0:
                raise CatalogError(f"{sid}: generator of {label} does not reduce to 0")
            primes[label] = data

    F, L, E = lookup(raw["F"]), lookup(raw["L"]), lookup(raw["E"])
    if not (E.has_subfield(L) and L.has_subfield(F)):
        raise CatalogError(f"{sid}: expected F <= L <= E")

    sigma = auts.get((raw["E"], raw["sigma"]))
    if sigma is None:
        raise CatalogError(f"{sid}: unknown sigma {raw['sigma']!r}")
    tau_name = raw.get("tau") or raw["sigma"]
    tau = auts.get((raw["E"], tau_name))
    if tau is None:
        raise CatalogError(f"{sid}: unknown tau {tau_name!r}")
    if E.relative_degree(L) != n_r:
        raise CatalogError(f"{sid}: [E:L] = {E.relative_degree(L)} but n_r = {n_r}")
    if L.relative_degree(F) != n:
        raise CatalogError(f"{sid}: [L:F] = {L.relative_degree(F)} but n = {n}")
    if sigma.order != n_r or not sigma.fixes(L):
        raise CatalogError(f"{sid}: sigma does not generate Gal(E/L)")
    if tau.order != n * n_r or not tau.fixes(F):
        raise CatalogError(f"{sid}: tau does not generate Gal(E/F)")
    tn = tau.power(n)
    if tn.image != sigma.image or not tn.fixes(L):
        raise CatalogError(f"{sid}: tau^n differs from sigma")

    try:
        gamma = L.coerce(raw["gamma"])
    except (ParseError, ValueError) as exc:
        raise CatalogError(f"{sid}: gamma: {exc}") from None
    if gamma == 0:
        raise CatalogError(f"{sid}: gamma must be nonzero")
    if not is_integral(gamma, L):
        raise CatalogError(f"{sid}: gamma = {raw['gamma']} is not integral")

    claimed = raw["claimed"] or {}
    rate = Fraction(str(raw["rate"]))
    setup = Setup(
        id=sid,
        F=F,
        n=n,
        n_r=n_r,
        n_t=n_t,
        L=L,
        E=E,
        fields=fields,
        sigma=sigma,
        tau=tau,
        gamma=gamma,
        claimed_table=_claimed(claimed.get("table")),
        claimed_theorem=_claimed(claimed.get("theorem")),
        claimed_rate=rate,
        smallest_primes=tuple((sp["label"], int(sp["norm"])) for sp in raw.get("smallest_primes", [])),
        nonnorm=dict(raw.get("nonnorm", {})),
        cited=dict(raw.get("cited", {})),
        primes=primes,
        embeddings=embeddings,
        extra=extra,
        raw=raw,
    )
    if setup.nonnorm and setup.nonnorm.get("kind") not in NONNORM_KINDS:
        raise CatalogError(f"{sid}: unknown non-norm evidence kind {setup.nonnorm.get('kind')!r}")
    if rate != code_rate(setup):
        raise CatalogError(f"{sid}: claimed rate {rate} differs from {code_rate(setup)}")
    return setup


# -- serialization ------------------------------------------------------------
def _field_doc(setup: Setup, fid: str, raw_field: dict) -> dict:
    k = setup.fields[fid]
    autos = {}
    for name, spec in raw_field.get("automorphisms", {}).items():
        autos[name] = {"image": format_element(k.coerce(spec["image"])), "restricts_to": spec.get("restricts_to")}
    primes = []
    for pr in raw_field.get("primes", []):
        d = setup.primes[pr["label"]]
        primes.append(
            {
                "label": d.label,
                "p": d.p,
                "modulus": list(d.modulus),
                "images": dict(d.images),
                "ramification_index": d.ramification_index,
                "extension_degree": d.extension_degree,
                "generator": None if d.generator is None else format_element(d.generator),
                "notes": d.notes,
            }
        )
    doc = {
        "id": fid,
        "base": raw_field["base"],
        "generator": k.generator_name,
        "min_poly": [format_element(c) for c in k.min_poly],
        "integral_basis": [format_element(b) for b in k.integral_basis],
        "automorphisms": autos,
        "primes": primes,
    }
    if "embedding" in raw_field:
        doc["embedding"] = list(raw_field["embedding"])
    return doc


def setup_to_doc(setup: Setup) -> dict:
    raw = setup.raw
    return {
        "id": setup.id,
        "F": raw["F"],
        "n": setup.n,
        "n_r": setup.n_r,
        "n_t": setup.n_t,
        "L": raw["L"],
        "E": raw["E"],
        "fields": [_field_doc(setup, fr["id"], fr) for fr in raw["fields"]],
        "sigma": raw["sigma"],
        "tau": raw.get("tau") or raw["sigma"],
        "gamma": format_element(setup.gamma),
        "claimed": {
            "table": None if setup.claimed_table is None else setup.claimed_table.to_json(),
            "theorem": None if setup.claimed_theorem is None else setup.claimed_theorem.to_json(),
        },
        "rate": str(setup.claimed_rate),
        "smallest_primes": [{"label": lab, "norm": nm} for lab, nm in setup.smallest_primes],
        "nonnorm": setup.nonnorm,
        "cited": setup.cited,
    }


def serialize(catalog: Catalog) -> str:
    doc = {
        "schema": 1,
        "version": catalog.version,
        "setups": [setup_to_doc(s) for s in catalog.setups],
        "extras": [setup_to_doc(s) for s in catalog.extras],
    }
    return canonical_dumps(doc)
