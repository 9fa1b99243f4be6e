#pragma once

#include <stdexcept>

namespace corrohar {

// Base for all library errors. Subtypes name the violated contract so callers
// can map them to exit codes or messages without string matching.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : Error { using Error::Error; };       // malformed input file
struct DictionaryError : Error { using Error::Error; };   // activity name not in the label set
struct IntegrityError : Error { using Error::Error; };    // conflicting sensor rows
struct ComputationError : Error { using Error::Error; };  // non-finite values in a window
struct ConfigError : Error { using Error::Error; };
struct SplitError : Error { using Error::Error; };
struct BalanceError : Error { using Error::Error; };
struct TrainingError : Error { using Error::Error; };
struct InputError : Error { using Error::Error; };
struct ProtocolError : Error { using Error::Error; };
struct SimulationError : Error { using Error::Error; };
struct ScoringError : Error { using Error::Error; };
struct ComparisonError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace corrohar
