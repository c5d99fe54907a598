"""Application constants."""

# Display formatting
SEPARATOR_LINE = "=" * 60
SEPARATOR_LINE_THIN = "-" * 40

# CLI commands
COMMAND_VALIDATE = "validate"
COMMAND_ENERGIES = "energies"
COMMAND_CRITICAL_POINTS = "critical-points"
COMMAND_HF = "hf"
COMMAND_PRODUCT_BOUND = "product-bound"
COMMAND_EXAMPLE = "example"
COMMAND_SELFTEST = "selftest"

COMMANDS = [
    COMMAND_VALIDATE,
    COMMAND_ENERGIES,
    COMMAND_CRITICAL_POINTS,
    COMMAND_HF,
    COMMAND_PRODUCT_BOUND,
    COMMAND_EXAMPLE,
    COMMAND_SELFTEST,
]

# Rho sources besides a file path
RHO_TRIVIAL = "trivial"
RHO_SEARCH = "search"

# Polytope source prefix for builtins ("builtin:cpn(3)")
BUILTIN_PREFIX = "builtin:"

# Rank methods
RANK_EXACT = "exact"
RANK_PROBABILISTIC = "probabilistic"
RANK_METHODS = [RANK_EXACT, RANK_PROBABILISTIC]

# Output formats
FORMAT_JSON = "json"
FORMAT_TABLE = "table"

# Exit codes
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_PARSE_ERROR = 2
EXIT_BUDGET_EXCEEDED = 3

# Largest field degree in the canonical table
MAX_FIELD_DEGREE = 16
