/*
 * Copyright (C) 2026 lgkit contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <span>
#include <string>

#include "lgk/lane_graph.hpp"

namespace lgk {

/// Deterministic SVG drawing of one or more lane graphs in a shared BEV
/// canvas (x right, z up): centerlines as quadratic paths, arrowheads for
/// travel direction, dots where connected lines join. Graphs are colored
/// by index.
std::string render_svg(std::span<const LaneGraph> graphs);

}  // namespace lgk
