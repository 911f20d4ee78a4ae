#pragma once

#include <string>

#include "hcr/image.hpp"

namespace hcr {

// Loads an 8-bit grayscale or RGB image in PNG or PGM (P5) format. RGB is
// converted with luma weights 0.299/0.587/0.114, rounded to nearest.
// Throws DataError with the path and cause on unreadable or unsupported files.
GrayImage load_image(const std::string& path);

void save_pgm(const std::string& path, const GrayImage& img);

// Foreground is written as ink (0) on a white (255) background.
void save_pgm(const std::string& path, const BinaryImage& img);

void save_png(const std::string& path, const GrayImage& img);

}  // namespace hcr
