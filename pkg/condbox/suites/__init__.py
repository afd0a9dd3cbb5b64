# Cond Box law suites
# Randomized, exact checks of the algebraic laws, one module per area

from .registry import CaseParams, LawSuite, SuiteInfo, SuiteRegistry
from .runner import CaseFailure, Report, SuiteRunner, run_suite
from .mutants import MUTANTS, applied, list_mutants

__all__ = [
    'CaseParams',
    'LawSuite',
    'SuiteInfo',
    'SuiteRegistry',
    'CaseFailure',
    'Report',
    'SuiteRunner',
    'run_suite',
    'MUTANTS',
    'applied',
    'list_mutants',
]

_INFRASTRUCTURE = {'registry', 'runner', 'generators', 'mutants'}


# Auto-discover and register suites when this package is imported
def _discover_suites():
    """Import every suite module so its @SuiteRegistry.register runs."""
    import importlib
    import logging
    import pkgutil
    from pathlib import Path

    logger = logging.getLogger(__name__)
    for finder, name, ispkg in pkgutil.iter_modules([str(Path(__file__).parent)]):
        if name.startswith('_') or name in _INFRASTRUCTURE:
            continue
        try:
            importlib.import_module(f'.{name}', package=__name__)
        except Exception as e:
            logger.error(f"[Suites] Failed to load suite '{name}': {e}")
            SuiteRegistry.record_load_error(name, f"{type(e).__name__}: {e}")


_discover_suites()
