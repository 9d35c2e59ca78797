#pragma once

namespace entangle {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kReportSchema = "report.v1";

}  // namespace entangle
