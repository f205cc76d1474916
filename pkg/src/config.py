"""Configuration settings for mirs."""

# File paths
LOG_DIR = "logs"
LOG_DIR_ENV = "MIRS_LOG_DIR"
MAX_LOG_FILES = 20
SEED_ENV = "MIRS_SEED"

# Structure parameters used when no --params file is given
DEFAULT_PARAMS = {
    'd': 3,
    'kmin': 3,
    'alpha': "-11/20",
    'kappa': "1/100",
    'pbar': None,   # None picks the canonical admissible value
    'kmax': None    # None means every odd k >= kmin
}

# Genericity is validated over enumerate_populated(max(R, GENERICITY_CUTOFF))
GENERICITY_CUTOFF = 6

# Search window for the canonical pbar
PBAR_MAX_DENOMINATOR = 100

# Simulation lattice
DEFAULT_SIM_CONFIG = {
    'dsim': 1,
    's': 0.25,
    'grid_t': 256,
    'grid_x': 256,
    'dt': 1.0,
    'dx': 1.0,
    'cutoff_rho': 0.25,
    'seed': 20240601
}

# Monte-Carlo run settings
DEFAULT_SIM_RUN = {
    'n_seeds': 32,
    'moment_order': 6,
    'block_count': 16,
    'eps_list': ["1", "1/2", "1/4"],
    'alpha': "-11/20",
    'centredness_orders': [1, 2, 3, 4, 5],
    'hermite_max_degree': 4,
    'bootstrap_replicates': 200,
    'slope_bins': 20,
    'slope_min_rho_hat': 0.5
}

# Rounding of empirical moments before they enter the exact pipeline
MOMENT_MAX_DENOMINATOR = 10 ** 6

# Property-suite sizes used by `mirs check`
CHECK_SETTINGS = {
    'seed': 7,
    'random_specs': 100,
    'spec_max_entries': 5,
    'additivity_pairs': 4000,
    'random_series': 40,
    'derivation_pairs': 100,
    'moment_sequences': 50,
    'appell_max_degree': 8,
    'composition_max_degree': 5,
    'composition_max_support': 4,
    'polynomial_point_triples': 20,
    'polynomial_max_degree': 4
}

# Process exit codes
EXIT_CODES = {
    'ok': 0,
    'property_failure': 1,
    'validation': 2,
    'non_generic': 3,
    'unexpected': 1
}

# Dependency-graph rendering (pyvis)
DAG_NETWORK_CONFIG = {
    'height': "750px",
    'width': "100%",
    'bgcolor': "#ffffff",
    'font_color': "#222222",
    'level_separation': 120
}

DAG_NODE_COLORS = {
    'pi': '#2196F3',
    'noise': '#4CAF50',
    'counterterm': '#FF5252'
}

DAG_EDGE_COLORS = {
    'depends': '#607D8B',
    'fixes': '#FFC107'
}

# Error messages
ERROR_MESSAGES = {
    'load_data': "Error loading {path}: {error}",
    'save_data': "Error saving {path}: {error}",
    'invalid_json': "Invalid JSON in {path}: {error}",
    'file_not_found': "File not found: {path}",
    'permission_error': "Permission denied accessing {path}",
    'missing_field': "{where}: missing required field '{field}'",
    'unknown_field': "{where}: unknown field '{field}'",
    'bad_type': "{where}: field '{field}' must be {expected}",
    'bad_rational': "{where}: '{value}' is not an exact rational",
    'non_generic': "Non-generic parameters: {detail}",
    'unknown_command': "Unknown command: {command}"
}
