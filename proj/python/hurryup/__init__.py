"""Big/little thread-mapping policy, calibrated server simulator and metrics."""

from ._core import (
    Arrival,
    Comparison,
    CoreOccupancy,
    CoreType,
    DwellSegment,
    HistogramBin,
    HurryupError,
    KeywordDist,
    MapperConfig,
    Move,
    Policy,
    PowerModel,
    Report,
    RequestOutcome,
    RequestRecord,
    ServiceModel,
    SimConfig,
    StatsEvent,
    Topology,
    Trace,
    PowerSample,
    __version__,
    compare,
    encode_event,
    generate_workload,
    histogram,
    initial_mapping,
    load_config_file,
    parse_line,
    percentile,
    report_from_trace,
    run,
    run_replay,
    select_migrations,
    service_time_ms,
    validate_config,
)

__all__ = [
    "Arrival",
    "Comparison",
    "CoreOccupancy",
    "CoreType",
    "DwellSegment",
    "HistogramBin",
    "HurryupError",
    "KeywordDist",
    "MapperConfig",
    "Move",
    "Policy",
    "PowerModel",
    "PowerSample",
    "Report",
    "RequestOutcome",
    "RequestRecord",
    "ServiceModel",
    "SimConfig",
    "StatsEvent",
    "Topology",
    "Trace",
    "__version__",
    "compare",
    "encode_event",
    "generate_workload",
    "histogram",
    "initial_mapping",
    "load_config_file",
    "parse_line",
    "percentile",
    "report_from_trace",
    "run",
    "run_replay",
    "select_migrations",
    "service_time_ms",
    "validate_config",
]
