#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "qwalk/model.hpp"

namespace qwalk {

/// Text checkpoint: a version line, the experiment config that built the
/// model, every parameter tensor with its shape, and an FNV-1a checksum of
/// everything above the checksum line.
void save_checkpoint(std::ostream& os, const ModelGraphNet& model, const std::string& config_text);
void save_checkpoint_file(const std::string& path, const ModelGraphNet& model, const std::string& config_text);

struct CheckpointContents {
  std::string config_text;
  ParameterSet parameters;
};

/// Throws DataError on a bad checksum or malformed content.
CheckpointContents load_checkpoint(std::istream& is);
CheckpointContents load_checkpoint_file(const std::string& path);

/// Copies values into a model built from the same config. Throws DataError
/// naming the first parameter whose name or shape differs.
void apply_checkpoint(const CheckpointContents& c, ModelGraphNet& model);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace qwalk
