# Configuration for spanfact
import os

# Graph construction and traversal
GRAPH_SETTINGS = {
    "max_vertices": 20000,           # Refuse to build graphs larger than this (desk scale)
}

# Spanning factorization settings
FACTOR_SETTINGS = {
    "search_budget": 16,             # Attempts made by search_spanning before giving up
    "default_seed": 0,               # Seed for shuffled attempts and randomized schedules
}

# Scheduling settings
SCHEDULE_SETTINGS = {
    "max_backtrack_nodes": 2_000_000,    # Node budget for the diameter-2 backtracking search
    "exhaustive_max_occurrences": 64,    # Largest instance the exhaustive feasibility oracle accepts
}

# Permutation group settings
GROUP_SETTINGS = {
    "element_cap": 100000,           # CapExceeded past this many group elements
}

# Worker threads for per-source sweeps
THREAD_SETTINGS = {
    "workers": int(os.environ.get("SPANFACT_THREADS", "1")),  # 1 = run inline
    "chunk_size": 256,               # Sources handed to a worker at a time
}

# Output settings
OUTPUT_SETTINGS = {
    "default_format": "text",        # "text" or "json"
    "json_indent": 2,
    "color": True,                   # Colorama colors in text reports
    "default_out_dir": "out",        # Artifact directory when --out is not given
}

# Logging settings
LOGGING = {
    "enabled": False,                # Write a log file in addition to stderr warnings
    "log_file": "spanfact.log",
    "log_level": "INFO",
    "log_discrepancies": True,       # Log formula-vs-oracle discrepancies at WARNING
}
