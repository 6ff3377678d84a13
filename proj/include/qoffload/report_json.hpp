#pragma once

#include "qoffload/runtime.hpp"
#include "qoffload/vqe.hpp"

#include <string>
#include <string_view>

namespace qoffload {

/// JSON documents printed by the CLI's --json mode. Durations are integer
/// microseconds; decoding throws Error(MalformedMessage).
[[nodiscard]] std::string job_result_to_json(const JobResult& r, Seed seed);
[[nodiscard]] JobResult job_result_from_json(std::string_view text, Seed* seed = nullptr);

[[nodiscard]] std::string vqe_report_to_json(const VqeReport& r);
[[nodiscard]] VqeReport vqe_report_from_json(std::string_view text);

}  // namespace qoffload
