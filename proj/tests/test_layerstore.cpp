#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "tfel/board.hpp"
#include "tfel/count_table.hpp"
#include "tfel/layer_file.hpp"

using namespace tfel;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("tfel_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

LayerMeta small_meta(PayloadKind kind, uint64_t positions, uint64_t batch_size) {
  LayerMeta m;
  m.rows = 2;
  m.cols = 2;
  m.goal_exp = 3;
  m.caps = Caps::uniform(2, 2, 2);
  m.sum = 4;
  m.turn = Turn::Player;
  m.payload = kind;
  m.position_count = positions;
  m.batch_size = batch_size;
  return m;
}

}  // namespace

TEST_CASE("layer create, open and meta round trip") {
  TempDir tmp;
  fs::path p = tmp.path / layer_file_name(4, Turn::Player);
  LayerMeta meta = small_meta(PayloadKind::Bit, 10, 8);
  {
    LayerFile f = LayerFile::create(p, meta);
    std::vector<uint8_t> bytes = {0xA5, 0x02};
    f.write_bytes(0, bytes);
    f.finalize();
  }
  LayerFile f = LayerFile::open(p);
  CHECK(f.meta().rows == 2);
  CHECK(f.meta().sum == 4);
  CHECK(f.meta().turn == Turn::Player);
  CHECK(f.meta().payload == PayloadKind::Bit);
  CHECK(f.meta().position_count == 10);
  CHECK(f.meta().caps == meta.caps);
  std::vector<uint8_t> back(2);
  f.read_bytes(0, back);
  CHECK(back == std::vector<uint8_t>{0xA5, 0x02});
  f.verify();
}

TEST_CASE("payload sizes per kind") {
  CHECK(LayerFile::position_bytes(PayloadKind::Bit, 10) == 2);
  CHECK(LayerFile::position_bytes(PayloadKind::Fixed32, 1) == 4);
  CHECK(small_meta(PayloadKind::Bit, 10, 8).payload_bytes() == 2);
  CHECK(small_meta(PayloadKind::Fixed32, 1, 8).payload_bytes() == 4);
}

TEST_CASE("batch round trip with a ragged tail") {
  TempDir tmp;
  LayerMeta meta = small_meta(PayloadKind::Fixed32, 10, 8);  // batches 8,2
  CHECK(meta.batch_count() == 2);
  LayerFile f = LayerFile::create(tmp.path / "t.layer", meta);
  std::vector<uint8_t> b0(32, 0x11), b1(8, 0x33);
  f.write_batch(0, b0);
  f.write_batch(1, b1);
  CHECK(f.read_batch(0) == b0);
  CHECK(f.read_batch(1) == b1);
  CHECK_THROWS(f.read_batch(2));
  f.verify();
}

TEST_CASE("corruption is caught by the checksum trailer") {
  TempDir tmp;
  fs::path p = tmp.path / "t.layer";
  LayerMeta meta = small_meta(PayloadKind::Fixed32, 10, 8);
  {
    LayerFile f = LayerFile::create(p, meta);
    std::vector<uint8_t> payload(40, 0x5C);
    f.write_bytes(0, payload);
    f.finalize();
    f.verify();
  }
  // flip one payload byte behind the file's back
  {
    std::fstream raw(p, std::ios::in | std::ios::out | std::ios::binary);
    raw.seekg(0, std::ios::end);
    auto end = raw.tellg();
    raw.seekp(std::streamoff(end) - 30);
    char z = 0;
    raw.write(&z, 1);
  }
  LayerFile f = LayerFile::open(p);
  CHECK_THROWS(f.verify());
}

TEST_CASE("checked open validates the position count against the table") {
  TempDir tmp;
  fs::path p = tmp.path / "t.layer";
  CountTable right = CountTable::build(Caps::uniform(2, 2, 2));
  LayerMeta meta = small_meta(PayloadKind::Bit, right.layer_size(4), 8);
  LayerFile::create(p, meta).finalize();
  CHECK_NOTHROW(open_layer_checked(p, right));
  CountTable wrong = CountTable::build(Caps::uniform(2, 2, 3));
  CHECK_THROWS(open_layer_checked(p, wrong));
}

TEST_CASE("open failures") {
  TempDir tmp;
  CHECK_THROWS(LayerFile::open(tmp.path / "absent.layer"));
  fs::path junk = tmp.path / "junk.layer";
  std::ofstream(junk) << "not a layer";
  CHECK_THROWS(LayerFile::open(junk));
}

TEST_CASE("bit payload addressing is lsb first") {
  std::vector<uint8_t> bytes(2, 0);
  set_bit(bytes, 0, true);
  set_bit(bytes, 9, true);
  CHECK(bytes[0] == 0x01);
  CHECK(bytes[1] == 0x02);
  CHECK(get_bit(bytes, 0));
  CHECK(!get_bit(bytes, 1));
  CHECK(get_bit(bytes, 9));
  set_bit(bytes, 0, false);
  CHECK(!get_bit(bytes, 0));
}

TEST_CASE("layer file naming by sum and turn") {
  CHECK(layer_file_name(12, Turn::Player) == "s12_P.layer");
  CHECK(layer_file_name(0, Turn::Computer) == "s0_C.layer");
}
