# Utility functions for mirs
import logging
import math
import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from src.config import ERROR_MESSAGES, SEED_ENV
from src.errors import ValidationError

logger = logging.getLogger(__name__)


def handle_error(e: Exception, logger: Optional[logging.Logger] = None,
                message: Optional[str] = None, log_traceback: bool = True) -> str:
    """Standardized error handling utility.

    Args:
        e: The exception to handle
        logger: Optional logger instance. If not provided, uses this module's logger.
        message: Optional custom message prefix. If not provided, uses a default.
        log_traceback: Whether to log the full traceback. Default is True.

    Returns:
        Error message string suitable for the command line.
    """
    if logger is None:
        logger = logging.getLogger(__name__)

    if message:
        error_msg = f"{message}: {str(e)}"
    else:
        error_msg = f"An error occurred: {str(e)}"

    logger.error(error_msg)
    logger.error(f"Error type: {type(e).__name__}")

    if log_traceback:
        logger.error(f"Traceback: {traceback.format_exc()}")

    return error_msg


def validate_payload(payload: Dict[str, Any], required_fields: List[str] = None,
                     field_types: Dict[str, Any] = None, allowed_fields: Optional[Iterable[str]] = None,
                     where: str = "input") -> Tuple[bool, Optional[str], Dict[str, Any]]:
    """Validate a decoded JSON object against required fields and types.

    Args:
        payload: The dictionary to validate
        required_fields: List of field names that must be present
        field_types: Dictionary mapping field names to a type or tuple of types
        allowed_fields: If given, any other key is rejected
        where: Location used in error messages (e.g. 'beta', 'params.alpha')

    Returns:
        Tuple of (is_valid, error_message, validated_payload)
    """
    if not isinstance(payload, dict):
        error_msg = f"{where}: expected a JSON object"
        logger.warning(error_msg)
        return False, error_msg, {}

    validated = dict(payload)

    if required_fields:
        for field in required_fields:
            if field not in validated:
                error_msg = ERROR_MESSAGES['missing_field'].format(where=where, field=field)
                logger.warning(error_msg)
                return False, error_msg, validated

    if allowed_fields is not None:
        allowed = set(allowed_fields)
        for field in validated:
            if field not in allowed:
                error_msg = ERROR_MESSAGES['unknown_field'].format(where=where, field=field)
                logger.warning(error_msg)
                return False, error_msg, validated

    if field_types:
        for field, expected_type in field_types.items():
            if field not in validated or validated[field] is None:
                continue
            value = validated[field]
            # bool is an int subclass; never accept it where a number is expected
            if isinstance(value, bool) and expected_type is not bool:
                ok = isinstance(expected_type, tuple) and bool in expected_type
            else:
                ok = isinstance(value, expected_type)
            if not ok:
                names = expected_type.__name__ if isinstance(expected_type, type) \
                    else " or ".join(t.__name__ for t in expected_type)
                error_msg = ERROR_MESSAGES['bad_type'].format(where=where, field=field, expected=names)
                logger.warning(error_msg)
                return False, error_msg, validated

    return True, None, validated


def require_payload(payload: Dict[str, Any], where: str, **kwargs) -> Dict[str, Any]:
    """validate_payload that raises ValidationError instead of returning a flag."""
    ok, error, validated = validate_payload(payload, where=where, **kwargs)
    if not ok:
        raise ValidationError(error)
    return validated


def parse_rational(value: Any, where: str = "value") -> Fraction:
    """Parse an exact rational from an int or a 'p/q' string.

    Floats are refused: every rational entering the algebra must be exact.
    """
    if isinstance(value, bool):
        raise ValidationError(ERROR_MESSAGES['bad_rational'].format(where=where, value=value))
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(ERROR_MESSAGES['bad_rational'].format(where=where, value=value))


def format_rational(value: Fraction) -> str:
    """Canonical 'p/q' (or 'p') string for a rational."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def multinomial(counts: Sequence[int]) -> int:
    """Multinomial coefficient (sum counts)! / prod(counts!)."""
    total = 0
    result = 1
    for c in counts:
        total += c
        result *= math.comb(total, c)
    return result


def parallel_map(func: Callable, items: Sequence[Any], jobs: int = 1) -> List[Any]:
    """Map func over items, in worker processes when jobs > 1.

    Results keep the order of items so callers merge deterministically.
    func must be a module-level function.
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug(f"parallel_map: {len(items)} items over {jobs} workers")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def seed_override(seed: int) -> int:
    """The MIRS_SEED environment value when set, else seed."""
    env_seed = os.environ.get(SEED_ENV)
    if not env_seed:
        return seed
    try:
        value = int(env_seed)
    except ValueError:
        raise ValidationError(f"{SEED_ENV}={env_seed!r} is not an integer")
    logger.info(f"Seed overridden by {SEED_ENV}: {value}")
    return value
