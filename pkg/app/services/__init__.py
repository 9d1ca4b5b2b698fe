"""Services module - business logic layer."""
from app.services.sequence_service import SequenceService, get_sequence_service, make_sequence_id
from app.services.comparator_service import ComparatorService, get_comparator_service, iterated_difference
from app.services.interval_service import log_interval
from app.services.asymptotics_service import AsymptoticsService, get_asymptotics_service
from app.services.bounds_service import BOUND_NAMES, BoundsService, get_bounds_service
from app.services.storage_service import LocalStorageService, get_storage_service
from app.services.report_service import emit_report
from app.services.reproduce_service import ReproduceService

__all__ = [
    "SequenceService",
    "get_sequence_service",
    "make_sequence_id",
    # Comparator
    "ComparatorService",
    "get_comparator_service",
    "iterated_difference",
    "log_interval",
    # Asymptotics and bounds
    "AsymptoticsService",
    "get_asymptotics_service",
    "BOUND_NAMES",
    "BoundsService",
    "get_bounds_service",
    # Storage and reports
    "LocalStorageService",
    "get_storage_service",
    "emit_report",
    "ReproduceService",
]
