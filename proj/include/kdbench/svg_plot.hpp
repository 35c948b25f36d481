#pragma once

#include <optional>
#include <string>

#include "kdbench/kd_metric.hpp"
#include "kdbench/report_io.hpp"

namespace kdbench {

/// Grid-local axis: x runs along the cube axis, y and z across it.
enum class SliceAxis { x = 0, y = 1, z = 2 };

std::optional<SliceAxis> slice_axis_from_string(const std::string& s);

// Scatter plot of one axis-aligned grid slice: valid points green, near-singular
// blue, unreachable red. Throws ParameterError when slice_index is outside
// [0, resolution). Output depends only on the arguments.
std::string render_slice_svg(const KDReport& report, SliceAxis axis, int slice_index,
                             const std::optional<RunManifest>& manifest = std::nullopt);

}  // namespace kdbench
