// SPDX-License-Identifier: Apache-2.0
#include "lgt/transcript.hpp"

#include <chrono>
#include <stdexcept>

namespace lgt {

TranscriptWriter::TranscriptWriter(const std::string& path) : path_(path) {
    out_.open(path, std::ios::out | std::ios::trunc);
    if (!out_) throw std::runtime_error("transcript: cannot open '" + path + "' for writing");
}

void TranscriptWriter::write(nlohmann::json entry) {
    if (!out_.is_open()) return;
    entry["seq"] = seq_++;
    entry["ts_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    out_ << entry.dump() << "\n";
    out_.flush();
}

void TranscriptWriter::step(int iteration, int epoch, const std::string& step_name,
                            nlohmann::json detail) {
    nlohmann::json entry{{"iteration", iteration}, {"epoch", epoch}, {"step", step_name}};
    if (!detail.is_null()) entry["detail"] = std::move(detail);
    write(std::move(entry));
}

}  // namespace lgt
