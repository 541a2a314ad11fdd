#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lzhmm/block_code.hpp"
#include "lzhmm/error.hpp"
#include "lzhmm/markov.hpp"

namespace lzhmm {

enum class Codec : std::uint8_t { lz = 0, ih = 1 };

inline constexpr std::uint8_t kContainerVersion = 1;

// Layout (big-endian integers):
//   "LZHM" | version u8 | codec u8 | |Σ| u16 | n u64
//   IH only: L u16 | codebook fingerprint u32
//   alphabet table: per symbol, u16 byte length + bytes
//   bit section: IH only, the n mod L trailing symbols as ℓ-bit indices; then the payload;
//   zero padding to a byte boundary.
struct ContainerHeader {
    Codec codec = Codec::lz;
    std::uint64_t n = 0;
    std::uint16_t block_length = 0;  // IH only
    std::uint32_t fingerprint = 0;   // IH only
    Alphabet alphabet;
};

class ContainerError : public Error {
public:
    enum class Kind { bad_magic, bad_version, bad_codec, truncated, fingerprint_mismatch, alphabet_mismatch, missing_model, trailing_data };

    ContainerError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

std::vector<std::uint8_t> compress_lz(std::span<const Symbol> x, const Alphabet& alphabet);
std::vector<std::uint8_t> compress_ih(std::span<const Symbol> x, const BlockCode& code);
// Builds the Shannon block code from the model's stationary P_L.
std::vector<std::uint8_t> compress_ih(std::span<const Symbol> x, const HiddenMarkovModel& model, std::size_t L);

ContainerHeader read_container_header(std::span<const std::uint8_t> bytes);

struct Decompressed {
    Alphabet alphabet;
    SymbolSeq symbols;
};

// IH containers need the model; its alphabet and rebuilt codebook fingerprint must match the header.
Decompressed decompress(std::span<const std::uint8_t> bytes, const HiddenMarkovModel* model = nullptr);

// File-level wrappers over the symbol text format. Without a model, LZ compresses the raw bytes.
void compress_file(const std::filesystem::path& in, const std::filesystem::path& out, Codec codec,
                   const HiddenMarkovModel* model = nullptr, std::size_t L = 0);
void decompress_file(const std::filesystem::path& in, const std::filesystem::path& out,
                     const HiddenMarkovModel* model = nullptr);

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace lzhmm
