# Copyright (c) 2026 The evsim developers
# Distributed under the MIT software license, see the accompanying
# file COPYING or http://www.opensource.org/licenses/mit-license.php.

"""Python bindings for the evsim simulator core."""

from ._evsim import (
    ConfigError,
    TopologyError,
    __version__,
    check_proof_of_work,
    config_digest,
    entropy_bits,
    finality_error_rate,
    header_hash,
    is_decentralised,
    load_config,
    merkle_proof,
    merkle_root,
    run,
    run_scenario,
    sender_cost,
    sha256d,
    sweep,
    topology,
    verify,
    verify_merkle_proof,
)

__all__ = [
    "ConfigError",
    "TopologyError",
    "__version__",
    "check_proof_of_work",
    "config_digest",
    "entropy_bits",
    "finality_error_rate",
    "header_hash",
    "is_decentralised",
    "load_config",
    "merkle_proof",
    "merkle_root",
    "run",
    "run_scenario",
    "sender_cost",
    "sha256d",
    "sweep",
    "topology",
    "verify",
    "verify_merkle_proof",
]
