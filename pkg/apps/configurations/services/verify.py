# apps/configurations/services/verify.py
# ================================================================================
"""
Checking condition ``A ⊨ R(ā) ⟺ M ⊨ I(R)(f_A(ā))``.

Every entry, every symbol and every argument tuple (repeats included) is
tried.  Entries are independent, so the sweep runs through the worker pool;
the first violation in entry order is reported.
"""

from __future__ import annotations

from functools import partial
from typing import TYPE_CHECKING

import structlog

from apps.configurations.conf import VERIFY_LOG_EVERY
from apps.configurations.datatype import ConfigEntry, ConfigWitness, Interpretation, Violation
from apps.configurations.exceptions import ConfigurationError
from apps.configurations.formulas import block_assignment, eval_qf
from apps.kernel.conf import current_limits
from apps.kernel.exceptions import TimeLimitExceededError
from apps.kernel.structures import all_tuples
from infrastructure.worker import run_jobs

if TYPE_CHECKING:
    from apps.kernel.structures import Tup

log = structlog.get_logger(__name__).bind(component="ConfigVerifier")


def entry_violation(interp: Interpretation, entry: ConfigEntry) -> tuple[str, Tup, bool] | None:
    for name, phi in interp.formulas:
        rel = entry.index.rel(name)
        for tup in all_tuples(entry.index.universe, interp.source.arity(name)):
            expected = tup in rel
            if eval_qf(phi, entry.target, block_assignment(entry.apply(tup))) != expected:
                return name, tup, expected
    return None


def verify_configuration(w: ConfigWitness, *, jobs: int | None = None) -> Violation | None:
    """``None`` when every entry satisfies the interpretation; an empty witness passes."""
    results = run_jobs(partial(entry_violation, w.interp), w.entries, label="config-entry", jobs=jobs)
    for n, res in enumerate(results):
        if n and n % VERIFY_LOG_EVERY == 0:
            log.debug("entries checked", done=n, total=len(results))
        if res.timed_out:
            raise TimeLimitExceededError(current_limits().TIME_LIMIT_S or 0.0)
        if res.value is not None:
            name, tup, expected = res.value
            violation = Violation(n, name, tup, expected)
            log.info("configuration violated", detail=violation.message, width=w.width)
            return violation
    log.debug("configuration verified", entries=len(w.entries), width=w.width, injective=w.injective)
    return None


def verified(w: ConfigWitness, what: str) -> ConfigWitness:
    """``w`` itself when it verifies; builders use this for their postcondition."""
    if (violation := verify_configuration(w)) is not None:
        msg = f"{what} does not verify: {violation.message}"
        raise ConfigurationError(msg)
    return w
