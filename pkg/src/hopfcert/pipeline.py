"""The duality pipeline over a manifest of base algebras, citations and sequences."""

import os

from .dsl import build_sequence, load_presentation, load_sequence, parse_manifest
from .duality import CertBundle, FactStore
from .exactseq import exactness_battery
from .homcalc import Resolution, ext_certificate, verify_resolution
from .report import Refusal, Report


def base_bundle(pf, window=6):
    """Verified resolution plus Ext certificates in every degree of the resolution."""
    A = pf.presentation
    if pf.resolution is None:
        raise Refusal(f"{A.name} ships no resolution block")
    res = Resolution.from_block(A, pf.resolution)
    rep = verify_resolution(res, window)
    certs = {}
    if rep.passed:
        for i in range(res.length + 1):
            certs[i] = ext_certificate(res, i, window)
    return CertBundle(rep, certs)


def record_hypotheses(store, seq, battery):
    ledger = store.add_sequence(seq.name, seq.B.name, seq.A.name, seq.H.name)
    if battery.passed:
        ledger.record("exact sequence battery", f"passed at degree {dict(battery.info)['degree']}")
    free = [c for c in battery.checks if c.name.startswith("freeness.")]
    if free and all(c.ok for c in free):
        ledger.record("faithfully flat as a left and right B-module",
                      "free basis witness " + " ".join(seq.witness))
    algs = (seq.B, seq.A, seq.H)
    if all(a.has_antipode_inv and not a.issues for a in algs):
        ledger.record("bijective antipodes", "S^-1 supplied and verified on generators")
    store.smoothness_from_facts(seq.name)
    return ledger


def derive(manifest_path, window=6, degree=None):
    """Run every manifest entry in order; returns (store, report)."""
    base_dir = os.path.dirname(manifest_path) or "."
    with open(manifest_path, encoding="utf-8") as fh:
        entries = parse_manifest(fh.read(), manifest_path)
    store = FactStore()
    rep = Report("duality derive")
    cache = {}
    for e in entries:
        try:
            if e.kind == "base":
                pf = load_presentation(os.path.join(base_dir, e.args[0]), cache=cache)
                bundle = base_bundle(pf, window)
                if not bundle.resolution.passed:
                    rep.merge(bundle.resolution, f"base.{e.name}")
                fact = store.register_base_fact(e.name, bundle)
                rep.add(f"base.{e.name}", True, f"{fact.flavor} {fact.dimension}")
            elif e.kind == "cite":
                dim, flavor, citation = e.args
                store.register_cited_fact(e.name, dim, flavor, citation)
                rep.add(f"cite.{e.name}", True, f"{flavor} {dim}")
            else:
                sf = load_sequence(os.path.join(base_dir, e.args[0]), cache=cache)
                seq = build_sequence(sf)
                D = seq.degree if degree is None else degree
                battery = exactness_battery(seq, D)
                rep.add(f"sequence.{seq.name}.battery", battery.passed, f"degree {D}",
                        None if battery.passed else "; ".join(c.name for c in battery.failures()))
                record_hypotheses(store, seq, battery)
                fact = store.apply_extension_rule(seq.name)
                rep.add(f"sequence.{seq.name}.rule", True, f"{fact.algebra}: {fact.flavor} {fact.dimension}")
        except Refusal as err:
            rep.add(f"{e.kind}.{e.name}", False, "refused", str(err))
            if rep.refused is None:
                rep.refuse(err)
    for a in sorted(store.facts):
        f = store.facts[a]
        rep.note(f"dim({a})", f"{f.dimension} ({f.flavor}, {f.provenance.kind})")
    return store, rep
