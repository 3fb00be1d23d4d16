"""Exact simulation and worst-case analysis of searching for a moving target on a line."""
from .adversary import (
    AdversaryWitness,
    AuditError,
    ConeAudit,
    NoWitness,
    cone_audit,
    departure_witness,
    eps_speed_witness,
    opposite_side_witness,
)
from .analysis import row_summary, verify_table, write_report_csv
from .bounds import Knowledge, analytic_cr_bound
from .evaluation import CrEvaluation, RoundCapExceeded, sup_cr_over_d, sup_cr_sweep
from .kinematics import (
    CatchResult,
    Direction,
    Instance,
    NoCatch,
    NoCatchError,
    Ray,
    Side,
    Trajectory,
    first_catch,
    instance_cr,
    optimal_offline_time,
    read_trajectory_csv,
    target_position,
    write_trajectory_csv,
)
from .optimizer import (
    ScalarOptResult,
    empirical_best_a,
    minimize_toward_bound,
    sequence_bound_no_knowledge,
    sequence_bound_no_speed,
    sequence_study,
    toward_bound,
)
from .strategies import (
    ExponentSeq,
    FullAway,
    FullToward,
    NoDistToward,
    NoKnowledgeAway,
    NoSpeedAway,
    NoSpeedToward,
    StrategySpec,
    Waiting,
    Zigzag,
    make_full_away,
    make_full_toward,
    make_no_dist_toward,
    make_no_knowledge_away,
    make_no_speed_away,
    make_no_speed_toward,
    make_strategy,
    make_waiting,
    make_zigzag,
    spec_from_dict,
    spec_from_json,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
