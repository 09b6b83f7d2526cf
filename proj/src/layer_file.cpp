#include "tfel/layer_file.hpp"

#include <cstring>
#include <stdexcept>

namespace tfel {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'E', 'L'};
constexpr uint8_t kVersion = 1;

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
void put_u64le(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}
uint32_t get_u32le(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(p[i]) << (8 * i);
  return v;
}
uint64_t get_u64le(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
  return v;
}

std::vector<uint8_t> encode_header(const LayerMeta& m) {
  std::vector<uint8_t> h;
  h.insert(h.end(), kMagic, kMagic + 4);
  h.push_back(kVersion);
  h.push_back(m.rows);
  h.push_back(m.cols);
  h.push_back(m.goal_exp);
  for (int i = 0; i < m.caps.cells(); ++i) h.push_back(m.caps.cap[i]);
  put_u32le(h, uint32_t(m.sum));
  h.push_back(uint8_t(m.turn));
  h.push_back(uint8_t(m.payload));
  put_u64le(h, m.position_count);
  put_u64le(h, m.batch_size);
  return h;
}

}  // namespace

uint64_t LayerMeta::batch_byte_begin(uint64_t b) const {
  return LayerFile::position_bytes(payload, b * batch_size);
}

uint64_t LayerMeta::batch_byte_end(uint64_t b) const {
  uint64_t last = std::min(position_count, (b + 1) * batch_size);
  return payload == PayloadKind::Bit ? (last + 7) / 8 : last * 4;
}

uint64_t LayerFile::header_bytes() const {
  return 4 + 1 + 3 + uint64_t(meta_.caps.cells()) + 4 + 1 + 1 + 8 + 8;
}

void LayerFile::check_open() const {
  if (!file_.is_open()) throw std::runtime_error("layer file is not open");
}

LayerFile LayerFile::create(const std::filesystem::path& path, const LayerMeta& meta) {
  if (meta.batch_size == 0 || meta.batch_size % 8 != 0)
    throw std::domain_error("storage batch size must be a positive multiple of 8");
  LayerFile f;
  f.meta_ = meta;
  f.path_ = path;
  f.writable_ = true;
  f.file_.open(path, std::ios::binary | std::ios::in | std::ios::out | std::ios::trunc);
  if (!f.file_) throw std::runtime_error("cannot create layer file: " + path.string());

  auto header = encode_header(meta);
  f.file_.write(reinterpret_cast<const char*>(header.data()), header.size());

  // zero payload + trailer
  std::vector<uint8_t> zeros(1 << 20, 0);
  uint64_t remaining = meta.payload_bytes() + 8 * meta.batch_count();
  while (remaining > 0) {
    uint64_t n = std::min<uint64_t>(remaining, zeros.size());
    f.file_.write(reinterpret_cast<const char*>(zeros.data()), n);
    remaining -= n;
  }
  f.file_.flush();
  if (!f.file_) throw std::runtime_error("short write creating layer file: " + path.string());
  return f;
}

LayerFile LayerFile::open(const std::filesystem::path& path, bool writable) {
  LayerFile f;
  f.path_ = path;
  f.writable_ = writable;
  auto mode = std::ios::binary | std::ios::in;
  if (writable) mode |= std::ios::out;
  f.file_.open(path, mode);
  if (!f.file_) throw std::runtime_error("cannot open layer file: " + path.string());

  uint8_t fixed[8];
  f.file_.read(reinterpret_cast<char*>(fixed), 8);
  if (!f.file_ || std::memcmp(fixed, kMagic, 4) != 0)
    throw std::runtime_error("bad magic in layer file: " + path.string());
  if (fixed[4] != kVersion)
    throw std::runtime_error("unsupported layer file version in " + path.string());
  LayerMeta& m = f.meta_;
  m.rows = fixed[5];
  m.cols = fixed[6];
  m.goal_exp = fixed[7];
  if (m.rows == 0 || m.rows > kMaxDim || m.cols == 0 || m.cols > kMaxDim)
    throw std::runtime_error("bad dims in layer file: " + path.string());
  m.caps = Caps(m.rows, m.cols);
  std::vector<uint8_t> rest(uint64_t(m.caps.cells()) + 4 + 1 + 1 + 8 + 8);
  f.file_.read(reinterpret_cast<char*>(rest.data()), rest.size());
  if (!f.file_) throw std::runtime_error("truncated layer header: " + path.string());
  size_t off = 0;
  for (int i = 0; i < m.caps.cells(); ++i) m.caps.cap[i] = rest[off++];
  m.sum = int(get_u32le(&rest[off]));
  off += 4;
  m.turn = rest[off++] ? Turn::Computer : Turn::Player;
  m.payload = rest[off++] ? PayloadKind::Fixed32 : PayloadKind::Bit;
  m.position_count = get_u64le(&rest[off]);
  off += 8;
  m.batch_size = get_u64le(&rest[off]);
  if (m.batch_size == 0 || m.batch_size % 8 != 0)
    throw std::runtime_error("bad batch size in layer file: " + path.string());

  auto expected = f.header_bytes() + m.payload_bytes() + 8 * m.batch_count();
  if (std::filesystem::file_size(path) != expected)
    throw std::runtime_error("layer file is truncated or oversized: " + path.string());
  return f;
}

void LayerFile::write_bytes(uint64_t offset, std::span<const uint8_t> data) {
  check_open();
  if (!writable_) throw std::runtime_error("layer file opened read-only");
  if (offset + data.size() > meta_.payload_bytes())
    throw std::out_of_range("write beyond layer payload");
  file_.seekp(std::streamoff(header_bytes() + offset));
  file_.write(reinterpret_cast<const char*>(data.data()), data.size());
  if (!file_) throw std::runtime_error("short write to layer file: " + path_.string());
}

void LayerFile::read_bytes(uint64_t offset, std::span<uint8_t> out) {
  check_open();
  if (offset + out.size() > meta_.payload_bytes())
    throw std::out_of_range("read beyond layer payload");
  file_.seekg(std::streamoff(header_bytes() + offset));
  file_.read(reinterpret_cast<char*>(out.data()), out.size());
  if (!file_) throw std::runtime_error("short read from layer file: " + path_.string());
}

void LayerFile::write_batch(uint64_t b, std::span<const uint8_t> payload) {
  if (b >= meta_.batch_count()) throw std::out_of_range("batch index out of range");
  uint64_t begin = meta_.batch_byte_begin(b), end = meta_.batch_byte_end(b);
  if (payload.size() != end - begin) throw std::domain_error("batch payload length mismatch");
  write_bytes(begin, payload);
  uint64_t sum = fnv1a64(payload.data(), payload.size());
  std::vector<uint8_t> enc;
  put_u64le(enc, sum);
  file_.seekp(std::streamoff(header_bytes() + meta_.payload_bytes() + 8 * b));
  file_.write(reinterpret_cast<const char*>(enc.data()), 8);
  if (!file_) throw std::runtime_error("short write to layer trailer: " + path_.string());
}

std::vector<uint8_t> LayerFile::read_batch(uint64_t b) {
  if (b >= meta_.batch_count()) throw std::out_of_range("batch index out of range");
  uint64_t begin = meta_.batch_byte_begin(b), end = meta_.batch_byte_end(b);
  std::vector<uint8_t> out(end - begin);
  read_bytes(begin, out);
  uint8_t enc[8];
  file_.seekg(std::streamoff(header_bytes() + meta_.payload_bytes() + 8 * b));
  file_.read(reinterpret_cast<char*>(enc), 8);
  if (!file_) throw std::runtime_error("short read from layer trailer: " + path_.string());
  if (get_u64le(enc) != fnv1a64(out.data(), out.size()))
    throw std::runtime_error("checksum mismatch in batch " + std::to_string(b) + " of " +
                             path_.string());
  return out;
}

void LayerFile::write_positions(uint64_t first, uint64_t count, std::span<const uint8_t> data) {
  if (meta_.payload == PayloadKind::Bit && (first % 8 != 0))
    throw std::domain_error("bit-payload writes must start on a byte boundary");
  uint64_t begin = position_bytes(meta_.payload, first);
  uint64_t end = meta_.payload == PayloadKind::Bit
                     ? begin + (count + 7) / 8
                     : begin + count * 4;
  if (data.size() != end - begin) throw std::domain_error("span payload length mismatch");
  write_bytes(begin, data);
}

std::vector<uint8_t> LayerFile::read_positions(uint64_t first, uint64_t count) {
  if (meta_.payload == PayloadKind::Bit && (first % 8 != 0))
    throw std::domain_error("bit-payload reads must start on a byte boundary");
  uint64_t begin = position_bytes(meta_.payload, first);
  uint64_t bytes = meta_.payload == PayloadKind::Bit ? (count + 7) / 8 : count * 4;
  std::vector<uint8_t> out(bytes);
  read_bytes(begin, out);
  return out;
}

void LayerFile::finalize() {
  check_open();
  if (!writable_) throw std::runtime_error("layer file opened read-only");
  for (uint64_t b = 0; b < meta_.batch_count(); ++b) {
    uint64_t begin = meta_.batch_byte_begin(b), end = meta_.batch_byte_end(b);
    std::vector<uint8_t> buf(end - begin);
    read_bytes(begin, buf);
    std::vector<uint8_t> enc;
    put_u64le(enc, fnv1a64(buf.data(), buf.size()));
    file_.seekp(std::streamoff(header_bytes() + meta_.payload_bytes() + 8 * b));
    file_.write(reinterpret_cast<const char*>(enc.data()), 8);
  }
  file_.flush();
  if (!file_) throw std::runtime_error("failed finalizing layer file: " + path_.string());
}

void LayerFile::verify() {
  for (uint64_t b = 0; b < meta_.batch_count(); ++b) (void)read_batch(b);
}

LayerFile open_layer_checked(const std::filesystem::path& path, const CountTable& table,
                             bool writable) {
  LayerFile f = LayerFile::open(path, writable);
  const LayerMeta& m = f.meta();
  if (m.caps != table.caps())
    throw std::runtime_error("layer caps mismatch (wrong caps/dims pairing): " + path.string());
  if (m.position_count != table.layer_size(m.sum))
    throw std::runtime_error("layer position count does not match the count table: " +
                             path.string());
  return f;
}

std::string layer_file_name(int sum, Turn turn) {
  return "s" + std::to_string(sum) + (turn == Turn::Player ? "_P" : "_C") + ".layer";
}

}  // namespace tfel
