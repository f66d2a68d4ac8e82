#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ipl::cli {

enum class ValueType { integer, real, text, real_list };

struct KeySpec {
    const char* key;
    ValueType type;
    const char* fallback;  ///< empty: unset unless given
    const char* help;
};

/// Every recognised parameter, in serialization order.
const std::vector<KeySpec>& key_specs();

extern const std::vector<std::string> commands;

struct RunConfig {
    std::string command;
    std::map<std::string, std::string> values;  ///< raw text per key, defaults filled

    bool has(const std::string& key) const;
    long integer(const std::string& key) const;
    double real(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::vector<double> real_list(const std::string& key) const;
};

/// Parses a key=value text file or a JSON object. Dashes in keys are read
/// as underscores; unknown keys throw InvalidArgument.
std::map<std::string, std::string> parse_config_text(const std::string& text);

/// Defaults, then `file_values`, then `flag_values`. Validates every value.
RunConfig resolve_config(const std::string& command, const std::map<std::string, std::string>& file_values,
                         const std::map<std::string, std::string>& flag_values);

/// Executes one command. Exit codes: 0 success, 2 validation or I/O error,
/// 3 numerical consistency failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point (argv[0] included).
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Shortest decimal that round-trips, "0" for negative zero.
std::string format_number(double value);

}  // namespace ipl::cli
