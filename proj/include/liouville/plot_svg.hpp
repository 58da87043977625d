#pragma once

#include <string>
#include <vector>

namespace liouville {

struct PlotOptions {
  std::string x_column = "r";
  bool log_x = true;
  int width = 720;
  int height = 480;
  std::string title;
};

// One polyline per requested column against x_column. Output is a pure
// function of the CSV contents and options.
void plot_svg(const std::string& csv_path, const std::vector<std::string>& columns, const std::string& out_path,
              const PlotOptions& options = {});

}  // namespace liouville
