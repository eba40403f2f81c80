#include <cctype>
#include <fstream>
#include <iterator>
#include <optional>

#include "door/core/error.hpp"
#include "door/vision/vision.hpp"

namespace door::vision {
namespace {

[[noreturn]] void invalid(const std::string& reason) { throw Error(ErrorCode::InvalidImage, "InvalidImage: " + reason); }

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::uint64_t number(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size()) invalid(std::string("truncated before ") + what);
    if (!std::isdigit(bytes_[pos_])) invalid(std::string("expected ") + what);
    std::uint64_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1u << 30)) invalid(std::string(what) + " too large");
      ++pos_;
    }
    if (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      invalid(std::string("malformed ") + what);
    }
    return value;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') invalid("unsupported magic");
  const bool binary = bytes[1] == '5';
  if (!binary && bytes[1] != '2') invalid("unsupported magic");
  if (bytes.size() > 2 && !std::isspace(bytes[2]) && bytes[2] != '#') invalid("unsupported magic");

  HeaderReader reader(bytes);
  reader.advance(2);
  const auto width = reader.number("width");
  const auto height = reader.number("height");
  const auto maxval = reader.number("maxval");
  if (width == 0 || height == 0) invalid("zero dimensions");
  if (maxval == 0 || maxval > 255) invalid("maxval must be in 1..255");
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (count > (std::size_t{1} << 28)) invalid("image too large");

  std::vector<std::uint8_t> pixels(count);
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.remaining() == 0) invalid("truncated raster");
    reader.advance(1);
    if (reader.remaining() < count) invalid("truncated raster");
    const auto raster = bytes.subspan(reader.pos(), count);
    for (std::size_t i = 0; i < count; ++i) {
      if (raster[i] > maxval) invalid("sample exceeds maxval");
      pixels[i] = raster[i];
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = reader.number("sample");
      if (v > maxval) invalid("sample exceeds maxval");
      pixels[i] = static_cast<std::uint8_t>(v);
    }
  }
  return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(pixels));
}

GrayImage decode_pgm(std::string_view bytes) {
  return decode_pgm(std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels().data()), image.size());
  return out;
}

GrayImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open " + path);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pgm(std::string_view(bytes));
}

void write_pgm_file(const std::string& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  const auto bytes = encode_pgm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::InvalidImage, "cannot write " + path);
}

}  // namespace door::vision
