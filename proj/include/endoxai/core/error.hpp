#pragma once

#include <stdexcept>
#include <string>

namespace endoxai {

// Error taxonomy mirrors the CLI exit codes: config -> 1, data -> 2,
// everything else -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user input: unknown keys, out-of-range settings, unknown backbone ids.
struct ConfigError : Error {
  using Error::Error;
};

/// Problems with the corpus, manifests, or checkpoints on disk.
struct DataError : Error {
  using Error::Error;
};

/// Missing environment pieces (e.g. pretrained weights that were never
/// installed), as opposed to bad configuration.
struct EnvironmentError : Error {
  using Error::Error;
};

/// A caller broke an API precondition (shape mismatch, out-of-range label).
struct ContractError : Error {
  using Error::Error;
};

/// Numeric blowup at runtime (NaN/inf loss or gradients). Training traps
/// this and aborts while preserving the last good checkpoint.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace endoxai
