#include "lzhmm/container.hpp"

#include <cstring>
#include <fstream>
#include <iterator>

#include "lzhmm/lz.hpp"

namespace lzhmm {

namespace {

constexpr char kMagic[4] = {'L', 'Z', 'H', 'M'};

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
    for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

class ByteCursor {
public:
    explicit ByteCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint64_t get_be(int n, const char* field) {
        need(static_cast<std::size_t>(n), field);
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v = (v << 8) | bytes_[pos_++];
        return v;
    }

    std::span<const std::uint8_t> take(std::size_t n, const char* field) {
        need(n, field);
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t position() const noexcept { return pos_; }

private:
    void need(std::size_t n, const char* field) const {
        if (bytes_.size() - pos_ < n)
            throw ContainerError(ContainerError::Kind::truncated, std::string("container truncated in ") + field);
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> write_container(const ContainerHeader& h, const BitString& bit_section) {
    std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
    out.push_back(kContainerVersion);
    out.push_back(static_cast<std::uint8_t>(h.codec));
    put_be(out, h.alphabet.size(), 2);
    put_be(out, h.n, 8);
    if (h.codec == Codec::ih) {
        put_be(out, h.block_length, 2);
        put_be(out, h.fingerprint, 4);
    }
    for (const std::string& s : h.alphabet.symbols()) {
        put_be(out, s.size(), 2);
        out.insert(out.end(), s.begin(), s.end());
    }
    out.insert(out.end(), bit_section.bytes().begin(), bit_section.bytes().end());
    return out;
}

// Returns the header and the byte offset of the bit section.
std::pair<ContainerHeader, std::size_t> parse_header(std::span<const std::uint8_t> bytes) {
    ByteCursor cur(bytes);
    auto magic = cur.take(4, "magic");
    if (std::memcmp(magic.data(), kMagic, 4) != 0) throw ContainerError(ContainerError::Kind::bad_magic, "not an LZHM container (bad magic)");
    const auto version = cur.get_be(1, "version");
    if (version != kContainerVersion)
        throw ContainerError(ContainerError::Kind::bad_version, "unsupported container version " + std::to_string(version));
    const auto codec = cur.get_be(1, "codec id");
    if (codec > 1) throw ContainerError(ContainerError::Kind::bad_codec, "unknown codec id " + std::to_string(codec));
    ContainerHeader h;
    h.codec = static_cast<Codec>(codec);
    const auto sigma = cur.get_be(2, "alphabet size");
    h.n = cur.get_be(8, "length");
    if (h.codec == Codec::ih) {
        h.block_length = static_cast<std::uint16_t>(cur.get_be(2, "block length"));
        h.fingerprint = static_cast<std::uint32_t>(cur.get_be(4, "fingerprint"));
        if (h.block_length == 0) throw ContainerError(ContainerError::Kind::truncated, "container declares L = 0");
    }
    std::vector<std::string> symbols;
    for (std::uint64_t i = 0; i < sigma; ++i) {
        const auto len = cur.get_be(2, "alphabet table");
        auto raw = cur.take(len, "alphabet table");
        symbols.emplace_back(raw.begin(), raw.end());
    }
    try {
        h.alphabet = Alphabet(std::move(symbols));
    } catch (const ModelError& e) {
        throw ContainerError(ContainerError::Kind::alphabet_mismatch, std::string("container alphabet: ") + e.what());
    }
    return {h, cur.position()};
}

void check_padding(const BitReader& reader, const BitString& bits) {
    if (reader.remaining() >= 8)
        throw ContainerError(ContainerError::Kind::trailing_data, "unexpected data after the payload");
    for (std::size_t i = reader.position(); i < bits.size(); ++i)
        if (bits[i]) throw ContainerError(ContainerError::Kind::trailing_data, "nonzero padding after the payload");
}

} // namespace

std::vector<std::uint8_t> compress_lz(std::span<const Symbol> x, const Alphabet& alphabet) {
    ContainerHeader h;
    h.codec = Codec::lz;
    h.n = x.size();
    h.alphabet = alphabet;
    return write_container(h, lz_encode(x, alphabet.size()));
}

std::vector<std::uint8_t> compress_ih(std::span<const Symbol> x, const BlockCode& code) {
    const std::size_t L = code.block_length();
    if (L > 0xFFFF) throw Error("block length does not fit the container");
    ContainerHeader h;
    h.codec = Codec::ih;
    h.n = x.size();
    h.block_length = static_cast<std::uint16_t>(L);
    h.fingerprint = code.fingerprint();
    h.alphabet = code.alphabet();

    check_symbols(x, code.alphabet().size());
    const std::size_t body = x.size() - x.size() % L;
    const SymbolCodec raw(code.alphabet().size());
    BitString bits;
    for (std::size_t i = body; i < x.size(); ++i) raw.encode(bits, x[i]);
    ih_encode(x.first(body), code, bits);
    return write_container(h, bits);
}

std::vector<std::uint8_t> compress_ih(std::span<const Symbol> x, const HiddenMarkovModel& model, std::size_t L) {
    return compress_ih(x, build_shannon_code(block_distribution(model, L), model.alphabet()));
}

ContainerHeader read_container_header(std::span<const std::uint8_t> bytes) { return parse_header(bytes).first; }

Decompressed decompress(std::span<const std::uint8_t> bytes, const HiddenMarkovModel* model) {
    auto [h, offset] = parse_header(bytes);
    const auto payload = bytes.subspan(offset);
    const BitString bits = BitString::from_bytes(payload, payload.size() * 8);
    BitReader reader(bits);
    Decompressed out;
    out.alphabet = h.alphabet;

    if (model && !(model->alphabet() == h.alphabet))
        throw ContainerError(ContainerError::Kind::alphabet_mismatch, "model alphabet differs from the container alphabet");

    if (h.codec == Codec::lz) {
        out.symbols = lz_decode(reader, h.alphabet.size(), h.n);
        check_padding(reader, bits);
        return out;
    }

    if (!model) throw ContainerError(ContainerError::Kind::missing_model, "IH containers need the model file to decode");
    const BlockCode code = build_shannon_code(block_distribution(*model, h.block_length), model->alphabet());
    if (code.fingerprint() != h.fingerprint)
        throw ContainerError(ContainerError::Kind::fingerprint_mismatch,
                             "codebook fingerprint mismatch: the model does not match the one used to compress");
    const std::size_t L = h.block_length;
    const std::size_t rem = h.n % L;
    const SymbolCodec raw(h.alphabet.size());
    SymbolSeq tail;
    for (std::size_t i = 0; i < rem; ++i) {
        auto s = raw.decode(reader);
        if (!s) throw DecodeError("λ in the raw remainder section", reader.position());
        tail.push_back(*s);
    }
    out.symbols = ih_decode(reader, code, h.n - rem);
    out.symbols.insert(out.symbols.end(), tail.begin(), tail.end());
    check_padding(reader, bits);
    return out;
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed for " + path.string());
}

void compress_file(const std::filesystem::path& in, const std::filesystem::path& out, Codec codec,
                   const HiddenMarkovModel* model, std::size_t L) {
    const auto raw = read_binary_file(in);
    const std::string_view text(reinterpret_cast<const char*>(raw.data()), raw.size());
    if (codec == Codec::ih) {
        if (!model) throw ContainerError(ContainerError::Kind::missing_model, "IH compression needs --model");
        if (L == 0) throw Error("IH compression needs -L");
        const SymbolSeq x = parse_symbol_text(text, model->alphabet());
        write_binary_file(out, compress_ih(x, *model, L));
        return;
    }
    const Alphabet alphabet = model ? model->alphabet() : byte_alphabet_of(text);
    const SymbolSeq x = parse_symbol_text(text, alphabet);
    write_binary_file(out, compress_lz(x, alphabet));
}

void decompress_file(const std::filesystem::path& in, const std::filesystem::path& out, const HiddenMarkovModel* model) {
    const auto bytes = read_binary_file(in);
    const Decompressed d = decompress(bytes, model);
    const std::string text = format_symbol_text(d.symbols, d.alphabet);
    write_binary_file(out, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

} // namespace lzhmm
