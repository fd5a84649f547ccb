#include "hotspot/nn/archive.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "hotspot/common/error.hpp"

namespace hotspot::nn {

static_assert(std::endian::native == std::endian::little, "archive I/O assumes little-endian");

namespace {

constexpr char kMagic[4] = {'H', 'S', 'P', 'A'};

template <typename T>
void write_pod(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  return v;
}

}  // namespace

const Archive::Entry* Archive::find(const std::string& name) const {
  for (const auto& e : tensors) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

void write_archive(const std::filesystem::path& path, const Archive& archive) {
  nlohmann::json index = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& e : archive.tensors) {
    index.push_back({{"name", e.name}, {"shape", e.tensor.shape()}, {"offset", offset}});
    offset += e.tensor.size();
  }
  nlohmann::json header = {{"format_version", kArchiveFormatVersion},
                           {"metadata", archive.metadata},
                           {"tensors", index}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open archive '" + path.string() + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(out, kArchiveFormatVersion);
  write_pod<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& e : archive.tensors) {
    out.write(reinterpret_cast<const char*>(e.tensor.data()),
              static_cast<std::streamsize>(e.tensor.size() * sizeof(double)));
  }
  if (!out) throw IoError("failed writing archive '" + path.string() + "'");
}

Archive read_archive(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open archive '" + path.string() + "'");
  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("'" + path.string() + "' is not a hotspot archive");
  }
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kArchiveFormatVersion) {
    throw ValidationError("archive '" + path.string() + "' has unsupported format version " +
                          std::to_string(version));
  }
  const auto header_len = read_pod<std::uint64_t>(in);
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw IoError("truncated archive header in '" + path.string() + "'");
  const auto header = nlohmann::json::parse(text);

  Archive archive;
  archive.metadata = header.at("metadata");
  for (const auto& item : header.at("tensors")) {
    Archive::Entry e;
    e.name = item.at("name").get<std::string>();
    e.tensor = Tensor(item.at("shape").get<std::vector<int>>());
    in.read(reinterpret_cast<char*>(e.tensor.data()),
            static_cast<std::streamsize>(e.tensor.size() * sizeof(double)));
    if (!in) throw IoError("truncated tensor '" + e.name + "' in '" + path.string() + "'");
    archive.tensors.push_back(std::move(e));
  }
  return archive;
}

void store_parameters(Archive& archive, const std::string& prefix, Layer& layer) {
  for (auto& [name, p] : named_parameters(layer, prefix)) {
    archive.tensors.push_back({name, p->value});
  }
}

void load_parameters(const Archive& archive, const std::string& prefix, Layer& layer) {
  for (auto& [name, p] : named_parameters(layer, prefix)) {
    const auto* e = archive.find(name);
    if (!e) throw ValidationError("archive is missing tensor '" + name + "'");
    if (e->tensor.shape() != p->value.shape()) {
      throw ValidationError("archive tensor '" + name + "' has shape " +
                            shape_string(e->tensor.shape()) + ", model expects " +
                            shape_string(p->value.shape()));
    }
    p->value = e->tensor;
  }
}

}  // namespace hotspot::nn
