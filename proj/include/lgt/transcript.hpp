// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

namespace lgt {

/// Line-delimited JSON log of a run: one object per loop step (train, advise,
/// apply, evaluate, prompt_update, history_append) with sequence numbers and
/// wall-clock timestamps. Agent-call entries carry the full request/response
/// and parse outcome. Timing lives here, never in the canonical RunRecord.
class TranscriptWriter {
public:
    TranscriptWriter() = default;
    explicit TranscriptWriter(const std::string& path);

    bool is_open() const { return out_.is_open(); }
    const std::string& path() const { return path_; }

    /// Writes one entry with seq + timestamp fields added.
    void write(nlohmann::json entry);

    void step(int iteration, int epoch, const std::string& step_name, nlohmann::json detail);

private:
    std::ofstream out_;
    std::string path_;
    std::int64_t seq_ = 0;
};

}  // namespace lgt
