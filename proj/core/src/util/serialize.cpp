#include "epiregime/util/serialize.hpp"

#include "epiregime/util/errors.hpp"

namespace epiregime {

BinaryWriter::BinaryWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw ValidationError("cannot open file for writing: " + path);
}

void BinaryWriter::u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
void BinaryWriter::u64(std::uint64_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
void BinaryWriter::i64(std::int64_t v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }
void BinaryWriter::f64(double v) { out_.write(reinterpret_cast<const char*>(&v), sizeof v); }

void BinaryWriter::str(const std::string& s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void BinaryWriter::vec_f64(const std::vector<double>& v) {
    u64(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void BinaryWriter::vec_i32(const std::vector<std::int32_t>& v) {
    u64(v.size());
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size() * sizeof(std::int32_t)));
}

BinaryReader::BinaryReader(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open file: " + path);
}

void BinaryReader::raw(void* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (!in_) throw ValidationError("truncated binary stream");
}

std::uint32_t BinaryReader::u32() { std::uint32_t v; raw(&v, sizeof v); return v; }
std::uint64_t BinaryReader::u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
std::int64_t BinaryReader::i64() { std::int64_t v; raw(&v, sizeof v); return v; }
double BinaryReader::f64() { double v; raw(&v, sizeof v); return v; }

std::string BinaryReader::str() {
    const auto n = u64();
    std::string s(n, '\0');
    if (n) raw(s.data(), n);
    return s;
}

std::vector<double> BinaryReader::vec_f64() {
    const auto n = u64();
    std::vector<double> v(n);
    if (n) raw(v.data(), n * sizeof(double));
    return v;
}

std::vector<std::int32_t> BinaryReader::vec_i32() {
    const auto n = u64();
    std::vector<std::int32_t> v(n);
    if (n) raw(v.data(), n * sizeof(std::int32_t));
    return v;
}

}  // namespace epiregime
