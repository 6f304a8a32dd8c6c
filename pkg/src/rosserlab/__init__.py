"""Decision procedures for KD and KDR, and finite simulators of the Rosser
provability enumerators whose traces realise them."""

from .decision import Verdict, correspondence_check, decide_kd, decide_kdr
from .kripke import KripkeFrame, KripkeModel, evaluate, frame_validity
from .modal import parse_modal, print_modal
from .objlang import parse_obj, print_obj
from .prop import is_tc
from .rosser_kd import WorldAssignment, build_M, run_g, run_h
from .rosser_kdr import compute_Y, run_gprime
from .streams import ProofStream
from .traces import EnumTrace

__version__ = "0.1.0"

__all__ = [
    "Verdict",
    "decide_kd",
    "decide_kdr",
    "correspondence_check",
    "KripkeFrame",
    "KripkeModel",
    "evaluate",
    "frame_validity",
    "parse_modal",
    "print_modal",
    "parse_obj",
    "print_obj",
    "is_tc",
    "WorldAssignment",
    "build_M",
    "run_g",
    "run_h",
    "compute_Y",
    "run_gprime",
    "ProofStream",
    "EnumTrace",
]
