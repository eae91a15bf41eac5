#include "qdnls/csvio.hpp"

#include <cstdio>

#include "qdnls/errors.hpp"

namespace qdnls::io {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)fnv1a(s));
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header_comment) {
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw InvalidInputError("cannot write " + path);
    f_ = f;
    if (!header_comment.empty()) std::fprintf(f, "# %s\n", header_comment.c_str());
}

CsvWriter::~CsvWriter() {
    if (f_) std::fclose((FILE*)f_);
}

void CsvWriter::header(const std::string& columns) {
    std::fprintf((FILE*)f_, "%s\n", columns.c_str());
}

void CsvWriter::row(const std::vector<double>& vals) {
    FILE* f = (FILE*)f_;
    for (std::size_t i = 0; i < vals.size(); ++i)
        std::fprintf(f, i ? ",%.17g" : "%.17g", vals[i]);
    std::fprintf(f, "\n");
}

} // namespace qdnls::io
