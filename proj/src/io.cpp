#include "cylab/io.hpp"

#include <cstdio>

namespace cylab {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(cplx v) {
    return fmt(v.real()) + (v.imag() < 0 ? "" : "+") + fmt(v.imag()) + "i";
}

CsvWriter::CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw ExperimentError("CsvWriter: cannot open " + path);
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << "\n"; }

void CsvWriter::header(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
    out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << fields[i];
    out_ << "\n";
}

void CsvWriter::close() { out_.close(); }

void write_json(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ExperimentError("write_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

}  // namespace cylab
