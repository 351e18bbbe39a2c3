#include "qwalk/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qwalk {

namespace {

constexpr std::string_view magic = "qwalk-checkpoint 1";

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string body(const ModelGraphNet& model, const std::string& config_text) {
  std::ostringstream os;
  os << magic << '\n';
  os << "config " << config_text.size() << '\n' << config_text << '\n';
  os << "parameters " << model.parameters().size() << '\n';
  for (const Parameter& p : model.parameters()) {
    os << "param " << p.name << ' ' << (p.trainable ? 1 : 0) << ' ' << p.shape.size();
    for (std::size_t s : p.shape) os << ' ' << s;
    os << '\n';
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << format_double(p.value[i]);
    os << '\n';
  }
  return os.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(std::ostream& os, const ModelGraphNet& model, const std::string& config_text) {
  const std::string b = body(model, config_text);
  os << b << "checksum " << hex64(fnv1a(b)) << '\n';
}

void save_checkpoint_file(const std::string& path, const ModelGraphNet& model, const std::string& config_text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write checkpoint '" + path + "'");
  save_checkpoint(f, model, config_text);
  if (!f) throw DataError("failed writing checkpoint '" + path + "'");
}

CheckpointContents load_checkpoint(std::istream& is) {
  const std::string all{std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
  const std::size_t at = all.rfind("checksum ");
  if (at == std::string::npos) throw DataError("checkpoint has no checksum line");
  const std::string_view content(all.data(), at);
  std::string stored = all.substr(at + 9);
  while (!stored.empty() && (stored.back() == '\n' || stored.back() == '\r')) stored.pop_back();
  if (stored != hex64(fnv1a(content))) throw DataError("checkpoint checksum mismatch (file is corrupted)");

  std::istringstream in{std::string(content)};
  std::string line;
  std::getline(in, line);
  if (line != magic) throw DataError("not a qwalk checkpoint (bad header '" + line + "')");

  CheckpointContents out;
  std::string word;
  std::size_t len = 0;
  if (!(in >> word >> len) || word != "config") throw DataError("checkpoint: missing config block");
  in.get();
  out.config_text.resize(len);
  in.read(out.config_text.data(), static_cast<std::streamsize>(len));
  std::size_t count = 0;
  if (!(in >> word >> count) || word != "parameters") throw DataError("checkpoint: missing parameter count");
  for (std::size_t k = 0; k < count; ++k) {
    std::string name;
    int trainable = 0;
    std::size_t rank = 0;
    if (!(in >> word >> name >> trainable >> rank) || word != "param") {
      throw DataError("checkpoint: malformed parameter header " + std::to_string(k));
    }
    std::vector<std::size_t> shape(rank);
    for (auto& s : shape) in >> s;
    const std::size_t idx = out.parameters.add(name, shape, trainable != 0);
    for (double& v : out.parameters[idx].value) {
      if (!(in >> v)) throw DataError("checkpoint: truncated values for '" + name + "'");
    }
  }
  return out;
}

CheckpointContents load_checkpoint_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint '" + path + "'");
  return load_checkpoint(f);
}

void apply_checkpoint(const CheckpointContents& c, ModelGraphNet& model) {
  ParameterSet& dst = model.parameters();
  if (dst.size() != c.parameters.size()) {
    throw DataError("checkpoint has " + std::to_string(c.parameters.size()) + " parameters, model has " +
                    std::to_string(dst.size()));
  }
  for (std::size_t k = 0; k < dst.size(); ++k) {
    const Parameter& src = c.parameters[k];
    if (src.name != dst[k].name || src.shape != dst[k].shape) {
      throw DataError("checkpoint parameter '" + src.name + "' " + shape_string(src.shape) +
                      " does not match model parameter '" + dst[k].name + "' " + shape_string(dst[k].shape));
    }
  }
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k].value = c.parameters[k].value;
}

}  // namespace qwalk
