#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include "spikeloom/engine.hpp"

namespace spikeloom {

struct SvgOptions {
  double px_per_ms = 0.35;
  int row_height_px = 7;
  /// Neurons drawn in the shaded stream band at the bottom (input rows).
  std::set<NeuronId> stream_rows{};
  /// Neurons drawn at the top (answer rows); everything else goes between.
  std::set<NeuronId> top_rows{};
};

/// Raster plot: one row per spiking neuron, x = time. Cosmetic companion to
/// the CSV export.
void write_svg(std::ostream& out, const Raster& raster, const SvgOptions& options = {});

void write_csv_file(const std::string& path, const Raster& raster);
void write_svg_file(const std::string& path, const Raster& raster, const SvgOptions& options = {});

}  // namespace spikeloom
