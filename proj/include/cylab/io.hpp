#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cylab/types.hpp"

namespace cylab {

// Shortest round-trip formatting; fixed format so equal inputs give equal
// bytes on every run and worker count.
std::string fmt(double v);
std::string fmt(cplx v);  // "re+imi" pair rendered as re,im by callers instead

// CSV with '#'-prefixed metadata comments and a single header line.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);
    void comment(const std::string& line);
    void header(const std::vector<std::string>& names);
    void row(const std::vector<std::string>& fields);
    void close();

  private:
    std::ofstream out_;
};

using Json = nlohmann::ordered_json;

void write_json(const std::string& path, const Json& j);

}  // namespace cylab
