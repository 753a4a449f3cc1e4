#include "gazeaudit/model_io.hpp"

#include <cstring>

#include "gazeaudit/error.hpp"
#include "gazeaudit/util.hpp"
#include "gazeaudit/version.hpp"

namespace gazeaudit {

namespace {

constexpr char kMagic[4] = {'G', 'A', 'Z', 'M'};

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    put_u64(out, bits);
}

struct Reader {
    const std::string& buf;
    std::size_t pos = 0;
    const std::string& path;

    void need(std::size_t n) const {
        if (pos + n > buf.size()) throw SchemaError(path + ": truncated model file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(buf[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double d;
        std::memcpy(&d, &bits, sizeof(d));
        return d;
    }
    std::string bytes(std::size_t n) {
        need(n);
        std::string s = buf.substr(pos, n);
        pos += n;
        return s;
    }
};

}  // namespace

void write_model_file(const std::string& path, const std::string& meta_json,
                      const std::vector<NamedTensor>& tensors) {
    std::string out;
    out.append(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(kModelFormatVersion));
    put_u64(out, meta_json.size());
    out.append(meta_json);
    put_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& t : tensors) {
        put_u32(out, static_cast<std::uint32_t>(t.name.size()));
        out.append(t.name);
        put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
        std::size_t n = 1;
        for (auto d : t.shape) {
            put_u64(out, d);
            n *= static_cast<std::size_t>(d);
        }
        if (n != t.data.size())
            throw IntegrityError("tensor '" + t.name + "': shape does not match data size");
        for (double d : t.data) put_f64(out, d);
    }
    write_file_atomic(path, out);
}

ModelFile read_model_file(const std::string& path) {
    const std::string buf = read_text_file(path);
    Reader r{buf, 0, path};
    const std::string magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw SchemaError(path + ": not a model file (bad magic)");
    const std::uint32_t version = r.u32();
    if (version != static_cast<std::uint32_t>(kModelFormatVersion))
        throw SchemaError(path + ": unsupported model format version " + std::to_string(version));
    ModelFile m;
    const std::uint64_t meta_len = r.u64();
    m.meta_json = r.bytes(static_cast<std::size_t>(meta_len));
    const std::uint32_t count = r.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
        NamedTensor t;
        const std::uint32_t name_len = r.u32();
        t.name = r.bytes(name_len);
        const std::uint32_t rank = r.u32();
        std::size_t n = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            t.shape.push_back(r.u64());
            n *= static_cast<std::size_t>(t.shape.back());
        }
        t.data.resize(n);
        for (std::size_t j = 0; j < n; ++j) t.data[j] = r.f64();
        m.tensors.push_back(std::move(t));
    }
    if (r.pos != buf.size()) throw SchemaError(path + ": trailing bytes after tensor table");
    return m;
}

}  // namespace gazeaudit
