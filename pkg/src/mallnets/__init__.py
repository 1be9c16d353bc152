"""MALL proof nets, rule commutations and sequentialization."""

from mallnets.syntax import (
    Formula, atom, natom, tensor, parr, with_, plus, cut,
    negate, leaves, parse_formula, parse_sequent, show, show_sequent,
)
from mallnets.proofs import Proof, Rule, check_proof, ProofError
from mallnets.nets import LinkingSet, translate_resolution, translate_inductive, net_eq

__version__ = "0.1.0"
