"""firedrill: deterministic fire-emergency training simulator.

Scenario files describe a 2D world of flammable objects with a timed spread
schedule; sessions run on a fixed 20 Hz timestep, are fully replayable from
recorded input traces, and end in a multi-criteria performance report.
"""

from .scenario import (EvacuationPlan, ExtinguisherKind, ExtinguisherSpec,
                       FlammableObject, HazardClass, Scenario, ScenarioError,
                       SpreadEvent, Violation, Zone, parse_scenario,
                       serialize_scenario, validate)
from .sim import (Event, FirePhase, FireState, InputSample, Outcome, SimState,
                  SprayGeometry, StepResult, apply_suppression, check_completion,
                  init_session, spray_effectiveness, step)
from .sessionlog import (LogError, ReplayDivergence, SessionLog, deserialize_log,
                         record_session, replay, scenario_hash, serialize_log)
from .assessment import (AssessmentReport, aiming_score, build_report,
                         correct_usage, evacuation_completion, report_to_dict,
                         report_to_json, response_time)
from .analytics import (AnalyticsError, AttemptDataset, AttemptRecord, PhaseStats,
                        UserTrend, emit_plot_data, load_attempts, per_user_trend,
                        phase_stats)

__version__ = "0.1.0"
