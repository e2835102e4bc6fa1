#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace symhom::cli
{

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum ExitCode : int
{
    kOk = 0,
    kCheckFailed = 1,
    kValidation = 2,
    kResource = 3,
    kInternal = 4,
};

// Replays reports keyed by a content hash of (version, command, parameters,
// input file contents). Entries are stored as the exact report text.
class ResultCache
{
public:
    explicit ResultCache(std::filesystem::path dir);

    std::optional<std::string> lookup(const std::string& key, std::ostream& warnings) const;
    void store(const std::string& key, const std::string& report) const;
    std::filesystem::path path_for(const std::string& key) const;

private:
    std::filesystem::path dir_;
};

// Hex content hash over the version and the canonical job description.
std::string cache_key(const nlohmann::json& job);

// Runs one invocation (args excludes the program name). The report goes to
// `out` (or the --output file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace symhom::cli
