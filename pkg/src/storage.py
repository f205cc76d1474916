# File access for JSON inputs/outputs and raw field dumps
import json
import logging
import os
from typing import Any

import numpy as np

from src.config import ERROR_MESSAGES
from src.errors import ValidationError

logger = logging.getLogger(__name__)


def load_json(path: str) -> Any:
    """Load a JSON document; every failure becomes a ValidationError."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        logger.debug(f"Loaded {path}")
        return data
    except FileNotFoundError:
        logger.error(f"Missing input file: {path}")
        raise ValidationError(ERROR_MESSAGES['file_not_found'].format(path=path))
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {path}: {str(e)}")
        raise ValidationError(ERROR_MESSAGES['invalid_json'].format(path=path, error=e))
    except PermissionError:
        logger.error(f"Permission error accessing {path}")
        raise ValidationError(ERROR_MESSAGES['permission_error'].format(path=path))
    except OSError as e:
        logger.error(f"Error loading {path}: {str(e)}")
        raise ValidationError(ERROR_MESSAGES['load_data'].format(path=path, error=e))


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def save_json(data: Any, path: str) -> bool:
    try:
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(dumps(data))
        logger.debug(f"Saved {path}")
        return True
    except PermissionError:
        logger.error(f"Permission error writing {path}")
        raise ValidationError(ERROR_MESSAGES['permission_error'].format(path=path))
    except OSError as e:
        logger.error(f"Error saving {path}: {str(e)}")
        raise ValidationError(ERROR_MESSAGES['save_data'].format(path=path, error=e))


def dump_field(field, path: str):
    """Write <path>.f64 (little-endian float64, C order) and a <path>.json sidecar."""
    cfg = field.config
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
    field.values.astype('<f8').tofile(f"{path}.f64")
    save_json({
        'shape': list(field.values.shape),
        'tag': field.tag,
        'dt': cfg.dt,
        'dx': cfg.dx,
        'dsim': cfg.dsim,
        's': cfg.s,
        'cutoff_rho': cfg.cutoff_rho,
        'seed': field.seed,
        'dtype': 'float64',
        'byteorder': 'little',
        'order': 'C'
    }, f"{path}.json")
    logger.info(f"Dumped {field.tag} field to {path}.f64")


def load_field(path: str):
    """Inverse of dump_field; the config is rebuilt from the sidecar over the defaults."""
    from src.noise_sim import LatticeField, SimConfig

    meta = load_json(f"{path}.json")
    shape = tuple(meta['shape'])
    try:
        values = np.fromfile(f"{path}.f64", dtype='<f8')
    except OSError as e:
        raise ValidationError(ERROR_MESSAGES['load_data'].format(path=f"{path}.f64", error=e))
    if values.size != int(np.prod(shape)):
        raise ValidationError(f"{path}.f64 holds {values.size} values, sidecar says {shape}")
    cfg = SimConfig(dsim=meta['dsim'], s=meta['s'], grid_t=shape[0], grid_x=shape[1],
                    dt=meta['dt'], dx=meta['dx'], cutoff_rho=meta.get('cutoff_rho', 0.25),
                    seed=meta['seed'] or 0)
    return LatticeField(values.reshape(shape), cfg, meta['tag'], meta['seed'])
