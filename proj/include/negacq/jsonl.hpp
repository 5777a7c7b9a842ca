#pragma once

#include "json.hpp"

#include <fstream>
#include <functional>
#include <iosfwd>
#include <string>

namespace negacq {

using Json = nlohmann::ordered_json;

/// Calls `fn(record, line_number)` for every JSON line of `is`.
/// Blank lines and lines starting with '#' are skipped. Parse failures and
/// exceptions thrown by `fn` are rethrown as Error("<origin>:<line>: ...").
void for_each_json_line(std::istream& is, const std::string& origin,
                        const std::function<void(const Json&, int)>& fn);
void for_each_json_line_in_file(const std::string& path,
                                const std::function<void(const Json&, int)>& fn);

/// Opens a file for writing, creating parent directories; throws Error on failure.
std::ofstream open_output(const std::string& path);

}  // namespace negacq
