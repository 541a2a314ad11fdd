#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lzhmm/markov.hpp"

namespace lzhmm {

inline constexpr int kModelSchemaVersion = 1;

// JSON model description:
//   {
//     "schema": 1,
//     "alphabet": ["0", "1"],
//     "states": 2,
//     "transitions": [[0.9, 0.1], [0.1, 0.9]],
//     "emissions":   [[1, 0], [0, 1]],
//     "initial": [0.5, 0.5]          (optional; defaults to the stationary law)
//   }
// Errors are ModelError with a field path ("transitions[1]: ...") or the JSON parse location.
HiddenMarkovModel parse_model_file(std::string_view text);
HiddenMarkovModel load_model_file(const std::filesystem::path& path);
std::string format_model_file(const HiddenMarkovModel& hmm);

} // namespace lzhmm
