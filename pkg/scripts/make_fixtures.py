"""Regenerate the bundled fixtures in canonical form.

    python scripts/make_fixtures.py [outdir]
"""
import os
import sys

from catsem import instances as I
from catsem import translators as tr
from catsem.compcat import compcat_over_point, identity_map, identity_transformation, trivial_compcat
from catsem.generators import chain, poset_category, powerset_lattice, terminal_category
from catsem.serialize import to_document, write_document
from catsem.structures import universe_cwa


def fixtures():
    diamond = poset_category([("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")])
    cwa_chain = universe_cwa(chain(2), "0<=1")
    cwa_fin = universe_cwa(I.finset2(), "1>2:0")
    contextual = dict(I.contextual_instances())["empty:1"]
    yield "terminal.category", terminal_category("1"), None
    yield "chain3.category", chain(3), None
    yield "bool2.category", powerset_lattice(2), None
    yield "finset2.category", I.finset2(), None
    yield "finset2_inj.dmc", I.finset2_injections(), "dmc"
    yield "counterexample_target.sdmc", I.counterexample_target(), "sdmc"
    yield "chain_partial.dmc", I.chain_partial(), "dmc"
    yield "bool2.clan", tr.lex_to_clan(powerset_lattice(2)), "clan"
    yield "chain3.clan", tr.lex_to_clan(chain(3)), "clan"
    yield "over_point_chain2.compcat", compcat_over_point(chain(2)), None
    yield "trivial_diamond.compcat", trivial_compcat(diamond), None
    yield "finset2_inj.compcat", tr.dmc_to_compcat(I.finset2_injections(), point="1"), None
    yield "contextual_point.compcat", contextual, None
    yield "chain2_bottom.compcat", dict(I.finite_core_targets())["chain2_bottom"], None
    yield "universe_chain2.cwa", cwa_chain, None
    yield "universe_finset2.cwa", cwa_fin, None
    yield "universe_chain2.cwf", tr.cwa_to_cwf(cwa_chain), None
    yield "universe_finset2.natmod", tr.cwf_to_natmod(tr.cwa_to_cwf(cwa_fin)), None
    yield "root_only.cxlcat", tr.cwa_to_cxlcat(tr.compcat_to_cwa(contextual)), None
    yield "fullify_unit_over_point.map", tr.fullify(compcat_over_point(chain(2)))[1], None
    yield "identity_trivial_chain2.transformation", identity_transformation(
        identity_map(trivial_compcat(chain(2), "1"))), None
    yield "sepcore_inclusion_bool2.functor", tr.sep_core(tr.lex_to_clan(powerset_lattice(2)))[1], None


def main(outdir: str) -> None:
    os.makedirs(outdir, exist_ok=True)
    for name, obj, kind in fixtures():
        write_document(to_document(obj, kind), os.path.join(outdir, name))
        print(name)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
