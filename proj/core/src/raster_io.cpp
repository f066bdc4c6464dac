#include "spikeloom/raster_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <vector>

namespace spikeloom {

namespace {

struct Row {
  NeuronId id;
  int y_index;
};

}  // namespace

void write_svg(std::ostream& out, const Raster& raster, const SvgOptions& options) {
  // Rows bottom-up: stream band, then plain neurons, answers on top. Only
  // neurons that actually spiked get a row.
  std::set<NeuronId> active;
  std::int64_t t_max = 1;
  for (const auto& e : raster.events()) {
    active.insert(e.neuron);
    t_max = std::max(t_max, e.time_ms);
  }
  std::vector<NeuronId> order;
  for (NeuronId id : active) {
    if (options.stream_rows.contains(id)) order.push_back(id);
  }
  const std::size_t stream_count = order.size();
  for (NeuronId id : active) {
    if (!options.stream_rows.contains(id) && !options.top_rows.contains(id)) {
      order.push_back(id);
    }
  }
  for (NeuronId id : active) {
    if (options.top_rows.contains(id)) order.push_back(id);
  }

  std::map<NeuronId, int> row_of;
  for (std::size_t i = 0; i < order.size(); ++i) {
    row_of[order[i]] = static_cast<int>(order.size() - 1 - i);  // bottom-up
  }

  const int rh = options.row_height_px;
  const int label_w = 70;
  const int width = label_w + static_cast<int>((t_max + 20) * options.px_per_ms) + 10;
  const int height = static_cast<int>(order.size()) * rh + 20;

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (stream_count > 0) {
    const int band_y = 10 + static_cast<int>(order.size() - stream_count) * rh;
    out << "<rect x=\"0\" y=\"" << band_y << "\" width=\"" << width << "\" height=\""
        << stream_count * rh << "\" fill=\"#e8e8e8\"/>\n";
  }
  for (const auto& [id, row] : row_of) {
    const int y = 10 + row * rh;
    out << "<text x=\"2\" y=\"" << y + rh - 2 << "\" font-size=\"" << rh - 1
        << "\" font-family=\"monospace\">" << raster.label(id) << "</text>\n";
  }
  for (const auto& e : raster.events()) {
    const int y = 10 + row_of[e.neuron] * rh;
    const double x = label_w + e.time_ms * options.px_per_ms;
    out << "<rect x=\"" << x << "\" y=\"" << y + 1 << "\" width=\"1.2\" height=\"" << rh - 2
        << "\" fill=\"black\"/>\n";
  }
  out << "</svg>\n";
}

void write_csv_file(const std::string& path, const Raster& raster) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  raster.write_csv(out);
}

void write_svg_file(const std::string& path, const Raster& raster, const SvgOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  write_svg(out, raster, options);
}

}  // namespace spikeloom
