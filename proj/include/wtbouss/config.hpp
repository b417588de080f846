#pragma once

#include <map>
#include <string>
#include <vector>

#include "wtbouss/evolve.hpp"

namespace wtbouss {

/// Flat `key = value` file, UTF-8, `#` comments.  Unknown keys are rejected;
/// overrides (from --set key=value) are applied after the file.
/// See README for the full key table and defaults.
RunConfig parse_config(const std::string& path, const std::vector<std::string>& overrides);

/// Parse from the already-loaded text (path only used in error messages).
RunConfig parse_config_text(const std::string& text, const std::string& path,
                            const std::vector<std::string>& overrides);

/// Keys that are consumed by specific commands rather than RunConfig.
struct ExtraKeys {
    std::vector<double> eps_list;                 // sweep / consistency / verify
    std::vector<std::pair<int, int>> modes;       // dispersion
    int consistency_n = 2;
    int samples = 100;
};
ExtraKeys parse_extra_keys(const std::string& path, const std::vector<std::string>& overrides);

/// full precision, locale-independent
std::string format_double(double x);

struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::string& header_comment,
                       const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::string& line);
    ~CsvWriter();

  private:
    struct Impl;
    Impl* impl_;
};

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& recs);
void write_summary_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Append one JSON object per line to errors.log in out_dir.
void append_error_record(const std::string& out_dir, const std::string& command,
                         int exit_code, const std::string& what);

}  // namespace wtbouss
