// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace lgt::prompts {

// Base prompt texts for the four agent roles. These are versioned text
// assets: the files under assets/prompts/ are the normative copies and the
// test suite asserts these constants match them byte for byte.
extern const char* const kAdvisorBase;
extern const char* const kEvaluatorBase;
extern const char* const kOptimizerBase;
extern const char* const kArchitectBase;

inline constexpr int kMetricWindow = 5;      // epochs of metrics shown to the advisor
inline constexpr int kMaxGuidanceNotes = 8;  // guidance-note capacity
inline constexpr int kNoteCharCap = 240;     // longer notes are truncated
inline constexpr int kPromptCharBudget = 8000;

}  // namespace lgt::prompts
