#include "negacq/jsonl.hpp"

#include "negacq/core.hpp"

#include <filesystem>
#include <fstream>
#include <istream>

namespace negacq {

void for_each_json_line(std::istream& is, const std::string& origin,
                        const std::function<void(const Json&, int)>& fn) {
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        Json record;
        try {
            record = Json::parse(line);
        } catch (const Json::exception& e) {
            throw Error(origin + ":" + std::to_string(number) + ": malformed JSON (" + e.what() + ")");
        }
        try {
            fn(record, number);
        } catch (const Json::exception& e) {
            throw Error(origin + ":" + std::to_string(number) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(origin + ":" + std::to_string(number) + ": " + e.what());
        }
    }
}

void for_each_json_line_in_file(const std::string& path,
                                const std::function<void(const Json&, int)>& fn) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    for_each_json_line(in, path, fn);
}

std::ofstream open_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    return out;
}

}  // namespace negacq
