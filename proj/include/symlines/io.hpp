#pragma once

#include <string>
#include <vector>

#include "symlines/geometry.hpp"
#include "symlines/polar_fourier.hpp"

namespace symlines {

// SYMSTACK1: one JSON header line, then m*N*N little-endian f32 values,
// row-major, image-major.
void write_stack(const std::string& path, const std::vector<Image>& images);
std::vector<Image> read_stack(const std::string& path);

// CSV "index,r11,...,r33" with 17 significant digits.
void write_rotations(const std::string& path, const std::vector<Rotation>& rs);
std::vector<Rotation> read_rotations(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

// "[stage] message" on stderr; silenced by set_log_quiet(true).
void log_line(const std::string& stage, const std::string& msg);
void set_log_quiet(bool quiet);

}  // namespace symlines
