"""molsplit - leakage-controlled dataset splitting for drug discovery."""

__version__ = "0.1.0"

# Bumped whenever manifest, report or fingerprint-hash layouts change.
FORMAT_VERSION = 1
