#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace epiregime {

/// Little binary stream pair used for checkpoint files. Fixed-width fields,
/// native endianness (checkpoints are host-local artifacts, not an exchange
/// format).
class BinaryWriter {
public:
    explicit BinaryWriter(const std::string& path);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v);
    void f64(double v);
    void str(const std::string& s);
    void vec_f64(const std::vector<double>& v);
    void vec_i32(const std::vector<std::int32_t>& v);
    bool good() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
};

class BinaryReader {
public:
    explicit BinaryReader(const std::string& path);
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    double f64();
    std::string str();
    std::vector<double> vec_f64();
    std::vector<std::int32_t> vec_i32();

private:
    void raw(void* dst, std::size_t n);
    std::ifstream in_;
};

}  // namespace epiregime
