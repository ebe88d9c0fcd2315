// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace lgt {

/// Outcome of hammering the three response parsers with adversarial inputs.
/// ok() means no parser aborted and every output satisfied its invariants;
/// fallback counts are informational.
struct FuzzReport {
    int iterations = 0;
    int aborts = 0;                 // exceptions escaping a parser
    int invariant_violations = 0;   // outputs violating their type invariants
    int advisor_fallbacks = 0;
    int evaluator_fallbacks = 0;
    int optimizer_fallbacks = 0;

    bool ok() const { return aborts == 0 && invariant_violations == 0; }
    std::string summary() const;
};

/// Deterministic fuzz corpus: random bytes, brace/quote-heavy text, truncated
/// canonical responses, random nested JSON, schema-shaped objects with random
/// fields, and valid responses embedded in prose.
FuzzReport fuzz_parsers(int iterations, std::uint64_t seed = 7);

}  // namespace lgt
