#ifndef LFIQA_IMAGE_IO_HPP
#define LFIQA_IMAGE_IO_HPP

#include <filesystem>

#include "lfiqa/image.hpp"

namespace lfiqa {

/// Decodes a BMP (uncompressed 24-bit or 8-bit palette) or PNG (8-bit
/// gray/RGB) file to a luma plane. RGB inputs are converted with BT.601
/// weights; grayscale samples pass through unchanged. The container format
/// is detected from the file signature, not the extension.
LumaImage load_image(const std::filesystem::path& path);

/// Same, from an in-memory byte buffer.
LumaImage decode_image(const unsigned char* bytes, size_t size, const std::string& origin);

} // namespace lfiqa

#endif
