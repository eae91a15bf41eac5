#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qdnls::io {

// FNV-1a over a string; used to stamp outputs with a config hash.
std::uint64_t fnv1a(const std::string& s);
std::string hash_hex(const std::string& s);

struct CsvWriter {
    explicit CsvWriter(const std::string& path, const std::string& header_comment = "");
    ~CsvWriter();
    void header(const std::string& columns);
    void row(const std::vector<double>& vals);

  private:
    void* f_;
};

} // namespace qdnls::io
