"""Monte-Carlo secrecy analysis of RIS-assisted wiretap links under Rician fading."""
from .channel import LinkBudget, Position2D, RadioParams, make_link, path_loss, sample_channel, trial_stream
from .phase_design import cascade, heuristic_min_eve, max_main_phases, random_phases
from .secrecy_metrics import EstimateWithCI, SnrPair, estimate, estimate_schemes, run_trial
from .experiments import ScenarioConfig, SweepSpec, load_config, run_sweep

__version__ = "0.1.0"
