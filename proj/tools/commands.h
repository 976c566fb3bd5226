#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

namespace smf::cli {

using nlohmann::json;

struct Context {
  std::ostream& out;
  std::ostream& err;
};

// Each adds its subcommands to `app`; the work runs in CLI11 callbacks.
void add_image_commands(CLI::App& app, Context& ctx);
void add_text_commands(CLI::App& app, Context& ctx);
void add_detect_commands(CLI::App& app, Context& ctx);
void add_stats_commands(CLI::App& app, Context& ctx);

/// Every option of `sub` with its parsed or default value.
json params_of(const CLI::App& sub);

/// {"tool": "smf", "version", "command", "params"}; callers add results.
json header(const CLI::App& sub);

/// "smf <version> <command> <params json>", used as a CSV comment line.
std::string comment_line(const CLI::App& sub);

/// Pretty JSON plus newline.
void print_json(std::ostream& out, const json& doc);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace smf::cli
