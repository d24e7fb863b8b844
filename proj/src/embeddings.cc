// Copyright 2026 The tbert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tbert/embeddings.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "httplib.h"
#include "json.hpp"

namespace tbert {

Matrix EmbeddingMatrix::to_matrix() const {
  Matrix m(rows(), dim);
  auto out = m.values();
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i];
  return m;
}

EmbeddingMatrix EmbeddingMatrix::from_matrix(std::vector<std::string> ids,
                                             const Matrix& m) {
  if (ids.size() != m.rows()) {
    throw std::invalid_argument("embedding ids do not match matrix rows");
  }
  EmbeddingMatrix out;
  out.ids = std::move(ids);
  out.dim = m.cols();
  out.data.reserve(m.values().size());
  for (double v : m.values()) out.data.push_back(static_cast<float>(v));
  return out;
}

void EmbeddingMatrix::validate() const {
  if (data.size() != ids.size() * dim) {
    throw std::runtime_error("embeddings: data size does not match " +
                             std::to_string(ids.size()) + " x " +
                             std::to_string(dim));
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw std::runtime_error("embeddings: non-finite value in row " +
                               std::to_string(i / dim) + " (id '" +
                               ids[i / dim] + "')");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) {
      throw std::runtime_error("embeddings: duplicate id '" + id + "'");
    }
  }
}

namespace {

constexpr char kMagic[4] = {'T', 'B', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& buf, std::uint16_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
}

class ByteReader {
 public:
  explicit ByteReader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto lo = static_cast<unsigned char>(bytes_[pos_]);
    const auto hi = static_cast<unsigned char>(bytes_[pos_ + 1]);
    pos_ += 2;
    return static_cast<std::uint16_t>(lo | (hi << 8));
  }

  std::string take(std::size_t n, const char* what) {
    need(n, what);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* what) const {
    if (bytes_.size() - pos_ < n) {
      throw std::runtime_error(std::string("tbem: truncated payload while "
                                           "reading ") +
                               what);
    }
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

std::string slurp(std::istream& in) {
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

void write_tbem(std::ostream& out, const EmbeddingMatrix& m) {
  if (m.data.size() != m.rows() * m.dim) {
    throw std::invalid_argument("tbem: matrix shape inconsistent");
  }
  std::string buf(kMagic, 4);
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(m.rows()));
  put_u32(buf, static_cast<std::uint32_t>(m.dim));
  for (float f : m.data) put_u32(buf, std::bit_cast<std::uint32_t>(f));
  for (const auto& id : m.ids) {
    if (id.size() > UINT16_MAX) {
      throw std::invalid_argument("tbem: id longer than 65535 bytes");
    }
    put_u16(buf, static_cast<std::uint16_t>(id.size()));
    buf += id;
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("tbem: write failed");
}

void write_tbem(const std::string& path, const EmbeddingMatrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_tbem(out, m);
}

EmbeddingMatrix read_tbem(std::istream& in) {
  ByteReader r(slurp(in));
  if (r.take(4, "magic") != std::string(kMagic, 4)) {
    throw std::runtime_error("tbem: bad magic");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kVersion) {
    throw std::runtime_error("tbem: unsupported version " +
                             std::to_string(version));
  }
  const std::uint32_t count = r.u32("count");
  const std::uint32_t dim = r.u32("dim");
  const std::uint64_t values = static_cast<std::uint64_t>(count) * dim;
  if (values * 4 > r.remaining()) {
    throw std::runtime_error("tbem: truncated payload (header declares " +
                             std::to_string(count) + " x " +
                             std::to_string(dim) + ")");
  }
  EmbeddingMatrix m;
  m.dim = dim;
  m.data.resize(values);
  for (auto& f : m.data) f = std::bit_cast<float>(r.u32("vectors"));
  m.ids.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint16_t len = r.u16("id length");
    m.ids.push_back(r.take(len, "id"));
  }
  if (!r.done()) throw std::runtime_error("tbem: trailing bytes after ids");
  m.validate();
  return m;
}

void write_embeddings_jsonl(std::ostream& out, const EmbeddingMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    nlohmann::ordered_json j;
    j["id"] = m.ids[r];
    const auto row = m.row(r);
    j["vector"] = std::vector<float>(row.begin(), row.end());
    out << j.dump() << '\n';
  }
}

EmbeddingMatrix read_embeddings_jsonl(std::istream& in) {
  EmbeddingMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("embeddings jsonl line " +
                               std::to_string(line_no) + ": " + e.what());
    }
    const auto& vec = j.at("vector");
    if (first) {
      m.dim = vec.size();
      first = false;
    } else if (vec.size() != m.dim) {
      throw std::runtime_error("embeddings jsonl line " +
                               std::to_string(line_no) + ": dimension " +
                               std::to_string(vec.size()) + " != " +
                               std::to_string(m.dim));
    }
    m.ids.push_back(j.at("id").get<std::string>());
    for (const auto& v : vec) {
      if (!v.is_number()) {
        throw std::runtime_error("embeddings jsonl line " +
                                 std::to_string(line_no) +
                                 ": non-numeric vector entry");
      }
      m.data.push_back(v.get<float>());
    }
  }
  m.validate();
  return m;
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embeddings file " + path);
  char head[4] = {0, 0, 0, 0};
  in.read(head, 4);
  const bool is_tbem = in.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  if (is_tbem) return read_tbem(in);
  if (head[0] != '{') {
    throw std::runtime_error("embeddings file " + path +
                             ": bad magic (neither TBEM nor JSONL)");
  }
  return read_embeddings_jsonl(in);
}

std::string default_embed_endpoint() {
  const char* env = std::getenv("TBERT_EMBED_ENDPOINT");
  return env == nullptr ? std::string() : std::string(env);
}

namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string base_path;
};

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex pattern(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(url, match, pattern)) {
    throw std::runtime_error("embed endpoint must be an http:// URL, got '" +
                             url + "'");
  }
  std::string base = match[2].str();
  while (!base.empty() && base.back() == '/') base.pop_back();
  return {match[1].str(), base};
}

}  // namespace

EmbeddingMatrix fetch_embeddings(const std::string& endpoint,
                                 std::span<const std::string> texts,
                                 std::size_t batch_size,
                                 std::span<const std::string> ids) {
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!ids.empty() && ids.size() != texts.size()) {
    throw std::invalid_argument("fetch_embeddings: ids and texts differ in size");
  }
  EmbeddingMatrix out;
  out.ids.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.ids.push_back(ids.empty() ? std::to_string(i) : ids[i]);
  }
  if (texts.empty()) return out;

  const Endpoint ep = parse_endpoint(endpoint);
  httplib::Client client(ep.origin);
  client.set_connection_timeout(10);
  client.set_read_timeout(300);
  const std::string path = ep.base_path + "/embed";

  bool have_dim = false;
  for (std::size_t start = 0; start < texts.size(); start += batch_size) {
    const std::size_t end = std::min(texts.size(), start + batch_size);
    nlohmann::json request;
    request["texts"] = std::vector<std::string>(texts.begin() + start,
                                                texts.begin() + end);
    auto res = client.Post(path, request.dump(), "application/json");
    if (!res) {
      throw std::runtime_error("embed request to " + endpoint +
                               " failed: " + httplib::to_string(res.error()));
    }
    if (res->status < 200 || res->status >= 300) {
      std::string detail = res->body;
      try {
        detail = nlohmann::json::parse(res->body).at("error").get<std::string>();
      } catch (const nlohmann::json::exception&) {
      }
      throw std::runtime_error("embed server returned status " +
                               std::to_string(res->status) + ": " + detail);
    }
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(std::string("embed server sent invalid JSON: ") +
                               e.what());
    }
    const std::size_t dim = body.at("dim").get<std::size_t>();
    const auto& vectors = body.at("vectors");
    if (vectors.size() != end - start) {
      throw std::runtime_error("embed server returned " +
                               std::to_string(vectors.size()) +
                               " vectors for " + std::to_string(end - start) +
                               " texts");
    }
    if (!have_dim) {
      out.dim = dim;
      have_dim = true;
    } else if (dim != out.dim) {
      throw std::runtime_error("embed server dimension changed between "
                               "batches: " +
                               std::to_string(out.dim) + " vs " +
                               std::to_string(dim));
    }
    for (const auto& vec : vectors) {
      if (vec.size() != dim) {
        throw std::runtime_error("embed server vector length " +
                                 std::to_string(vec.size()) +
                                 " does not match declared dim " +
                                 std::to_string(dim));
      }
      for (const auto& v : vec) out.data.push_back(v.get<float>());
    }
  }
  out.validate();
  return out;
}

EmbeddingMatrix l2_normalize(const EmbeddingMatrix& m,
                             std::vector<std::size_t>* zero_rows) {
  EmbeddingMatrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double sq = 0.0;
    for (float v : m.row(r)) sq += static_cast<double>(v) * v;
    if (sq == 0.0) {
      if (zero_rows != nullptr) zero_rows->push_back(r);
      continue;
    }
    const double norm = std::sqrt(sq);
    for (std::size_t c = 0; c < m.dim; ++c) {
      out.data[r * m.dim + c] =
          static_cast<float>(static_cast<double>(m.data[r * m.dim + c]) / norm);
    }
  }
  return out;
}

std::vector<double> mean_pool(const Matrix& token_vectors) {
  if (token_vectors.rows() == 0) {
    throw std::invalid_argument("mean_pool: no token vectors (T = 0)");
  }
  std::vector<double> mean(token_vectors.cols(), 0.0);
  for (std::size_t r = 0; r < token_vectors.rows(); ++r) {
    const auto row = token_vectors.row(r);
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += row[c];
  }
  const double inv = 1.0 / static_cast<double>(token_vectors.rows());
  for (double& v : mean) v *= inv;
  return mean;
}

EmbeddingMatrix align_embeddings(const EmbeddingMatrix& m,
                                 std::span<const std::string> ids) {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) index.emplace(m.ids[r], r);
  EmbeddingMatrix out;
  out.dim = m.dim;
  out.ids.assign(ids.begin(), ids.end());
  out.data.reserve(ids.size() * m.dim);
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) {
      throw std::runtime_error("no embedding for document id '" + id + "'");
    }
    const auto row = m.row(it->second);
    out.data.insert(out.data.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace tbert
