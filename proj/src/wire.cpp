#include "subsync/wire.hpp"

#include <algorithm>
#include <string>

#include "subsync/error.hpp"

namespace subsync::wire {

namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::size_t v) {
        if (v > 0xFFFF) throw Error(Errc::FormatError, "field does not fit in 16 bits");
        u8(static_cast<std::uint8_t>(v >> 8));
        u8(static_cast<std::uint8_t>(v));
    }
    void u32(std::size_t v) {
        if (v > 0xFFFFFFFFULL) throw Error(Errc::FormatError, "field does not fit in 32 bits");
        for (int shift = 24; shift >= 0; shift -= 8) u8(static_cast<std::uint8_t>(v >> shift));
    }
    void bigint(const BigInt& v) {
        if (v < 0) throw Error(Errc::FormatError, "negative integer field");
        std::size_t count = 0;
        std::vector<std::uint8_t> bytes((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
        mpz_export(bytes.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
        bytes.resize(count);
        u16(bytes.size());
        out_.insert(out_.end(), bytes.begin(), bytes.end());
    }
    void bits(const BitString& s) {
        const auto b = to_binary(s);
        out_.insert(out_.end(), b.begin(), b.end());
    }
    void header(Scheme scheme, const EditParams& p) {
        out_.insert(out_.end(), std::begin(kMagic), std::end(kMagic));
        u8(kVersion);
        u8(static_cast<std::uint8_t>(scheme));
        u32(p.n);
        if (p.t > 0xFF || p.k > 0xFF) throw Error(Errc::FormatError, "t and k must fit in one byte");
        u8(static_cast<std::uint8_t>(p.t));
        u8(static_cast<std::uint8_t>(p.k));
    }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint8_t u8() {
        need(1);
        return bytes_[pos_++];
    }
    std::size_t u16() {
        const std::size_t hi = u8();
        return (hi << 8) | u8();
    }
    std::size_t u32() {
        std::size_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | u8();
        return v;
    }
    BigInt bigint() {
        const std::size_t len = u16();
        need(len);
        BigInt v;
        if (len > 0) mpz_import(v.get_mpz_t(), len, 1, 1, 1, 0, bytes_.data() + pos_);
        pos_ += len;
        return v;
    }
    BitString bits() {
        auto [s, used] = from_binary(bytes_.subspan(pos_));
        pos_ += used;
        return s;
    }
    void finish() const {
        if (pos_ != bytes_.size()) throw Error(Errc::FormatError, "trailing bytes after encoding");
    }

private:
    void need(std::size_t count) const {
        if (bytes_.size() - pos_ < count) throw Error(Errc::FormatError, "truncated encoding");
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

Modulus read_modulus(Reader& r) {
    BigInt v = r.bigint();
    if (v < 2) throw Error(Errc::FormatError, "modulus below 2");
    return Modulus(std::move(v));
}

BigInt read_residue(Reader& r, const Modulus& m) {
    BigInt v = r.bigint();
    if (v >= m.value()) throw Error(Errc::FormatError, "residue not below its modulus");
    return v;
}

}  // namespace

std::vector<std::uint8_t> serialize(const WorstCaseEncoding& enc) {
    Writer w;
    w.header(Scheme::Worst, enc.params);
    w.bigint(enc.modulus.value());
    w.bigint(enc.residue);
    return w.take();
}

std::vector<std::uint8_t> serialize(const AverageCaseEncoding& enc) {
    Writer w;
    if (const auto* nd = std::get_if<NonDenseEncoding>(&enc)) {
        w.header(Scheme::AverageNonDense, nd->inner.params);
        w.bigint(nd->inner.modulus.value());
        w.bigint(nd->inner.residue);
        return w.take();
    }
    const auto& d = std::get<DenseEncoding>(enc);
    w.header(Scheme::AverageDense, d.params);
    w.bits(d.density.pattern);
    w.u32(d.density.window);
    w.bigint(d.hint.modulus.value());
    w.bigint(d.hint.residue);
    w.bigint(d.modulus.value());
    w.bigint(d.residue);
    return w.take();
}

Message deserialize(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    for (std::uint8_t m : kMagic)
        if (r.u8() != m) throw Error(Errc::FormatError, "bad magic");
    if (const auto version = r.u8(); version != kVersion)
        throw Error(Errc::FormatError, "unsupported version " + std::to_string(version));
    const std::uint8_t scheme = r.u8();
    if (scheme > static_cast<std::uint8_t>(Scheme::AverageNonDense))
        throw Error(Errc::FormatError, "unknown scheme " + std::to_string(scheme));
    EditParams params;
    params.n = r.u32();
    params.t = r.u8();
    params.k = r.u8();
    if (params.n < 1 || params.k < 1) throw Error(Errc::FormatError, "invalid edit parameters in header");

    switch (static_cast<Scheme>(scheme)) {
        case Scheme::Worst:
        case Scheme::AverageNonDense: {
            Modulus m = read_modulus(r);
            BigInt residue = read_residue(r, m);
            r.finish();
            WorstCaseEncoding enc{std::move(residue), std::move(m), params};
            if (scheme == static_cast<std::uint8_t>(Scheme::Worst)) return enc;
            return AverageCaseEncoding{NonDenseEncoding{std::move(enc)}};
        }
        case Scheme::AverageDense: {
            DensityConfig density;
            density.pattern = r.bits();
            density.window = r.u32();
            if (density.pattern.size() > density.window)
                throw Error(Errc::FormatError, "pattern longer than the density window");
            Modulus hm = read_modulus(r);
            BigInt hr = read_residue(r, hm);
            Modulus m = read_modulus(r);
            BigInt residue = read_residue(r, m);
            r.finish();
            return AverageCaseEncoding{DenseEncoding{Hint{std::move(hr), std::move(hm)}, std::move(residue),
                                                     std::move(m), std::move(density), params}};
        }
    }
    throw Error(Errc::FormatError, "unknown scheme");
}

}  // namespace subsync::wire
