#pragma once

#include "polyserendip/fem.hpp"
#include "polyserendip/geometry.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace polyserendip {

/// {"vertices": [[x, y], ...]}; validated on load.
Polygon polygon_from_json(std::string_view text, Convexity mode = Convexity::Strict);
std::string polygon_to_json(const Polygon& polygon);
Polygon load_polygon(const std::filesystem::path& path, Convexity mode = Convexity::Strict);

/// {"vertices": [[x, y], ...], "cells": [[i0, i1, ...], ...]}, 0-based indices.
PolyMesh mesh_from_json(std::string_view text);
std::string mesh_to_json(const PolyMesh& mesh);
PolyMesh load_mesh(const std::filesystem::path& path);

/// Dense CSV, one matrix row per line, full double precision.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& matrix);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace polyserendip
