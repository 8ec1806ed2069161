// Copyright 2026 the sensorank authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pipeline/commands.hpp"

#include <fstream>
#include <sstream>

#include "adapter/adapter_oracle.hpp"
#include "common/error.hpp"
#include "common/parallel.hpp"
#include "geometry/embedding.hpp"
#include "geometry/local_isotropy.hpp"
#include "geometry/spectrum.hpp"
#include "jacobian/estimator.hpp"
#include "pipeline/options.hpp"
#include "pipeline/preprocess.hpp"
#include "probegen/dataset.hpp"
#include "probegen/png_io.hpp"
#include "readout/readout.hpp"
#include "stats/correlation.hpp"
#include "stats/records.hpp"

namespace fs = std::filesystem;

namespace sensorank::pipeline {
namespace {

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::kConfig, msg); }

std::string required_path(const Json& section, const char* key, const char* flag) {
  const auto v = section.at(key).get<std::string>();
  if (v.empty()) config_error(std::string("missing required option ") + flag);
  return v;
}

Json result_header(const std::string& command, const std::string& model, const Json& resolved) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  if (!model.empty()) j["model"] = model;
  j["config_hash"] = config_hash(echo_config(command, resolved));
  return j;
}

void write_outputs(const fs::path& dir, const std::string& command, const Json& resolved, const Json* result) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::kIo, "cannot create output directory '" + dir.string() + "'");
  write_text(dir / "resolved_config.toml", echo_config(command, resolved));
  if (result) write_text(dir / "result.json", result->dump(2) + "\n");
}

std::string stem_label(const std::string& path) { return fs::path(path).stem().string(); }

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  require(static_cast<bool>(out.flush()), ErrorCode::kIo, "cannot write '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

toyenc::EncoderSpec encoder_spec(const Json& enc, const std::string& kind_override) {
  toyenc::EncoderSpec spec;
  spec.kind = kind_override.empty() ? enc.at("kind").get<std::string>() : kind_override;
  if (spec.kind != "linear" && spec.kind != "mlp" && !toyenc::is_bag_kind(spec.kind))
    config_error("unknown builtin encoder '" + spec.kind + "'");
  spec.seed = enc.at("seed").get<std::uint64_t>();
  spec.widths = enc.at("widths").get<std::vector<std::size_t>>();
  if (spec.widths.empty() || std::find(spec.widths.begin(), spec.widths.end(), 0u) != spec.widths.end())
    config_error("encoder widths must be a non-empty list of positive sizes");
  const auto act = toyenc::parse_activation(enc.at("activation").get<std::string>());
  if (!act) config_error("unknown activation '" + enc.at("activation").get<std::string>() + "'");
  spec.activation = *act;
  const auto shape = enc.at("input_shape").get<std::vector<std::size_t>>();
  if (shape.size() != 3 || shape[0] == 0 || shape[1] == 0 || shape[2] == 0)
    config_error("encoder input_shape must be three positive sizes C H W");
  spec.input_shape = {shape[0], shape[1], shape[2]};
  spec.scale = enc.at("scale").get<double>();
  spec.output_dim = enc.at("output_dim").get<std::size_t>();
  spec.bag_dim = enc.at("bag_dim").get<std::size_t>();
  if (spec.bag_dim == 0) config_error("encoder bag_dim must be positive");
  return spec;
}

std::unique_ptr<jacobian::JvpOracle> open_oracle(const std::string& spec, const Json& encoder) {
  if (spec.rfind("adapter:", 0) == 0) {
    const std::string cmd = spec.substr(8);
    if (cmd.empty()) config_error("adapter oracle needs a command: adapter:CMD");
    return std::make_unique<adapter::AdapterOracle>(cmd);
  }
  if (spec == "builtin") return toyenc::make_builtin_oracle(encoder_spec(encoder));
  if (spec.rfind("builtin:", 0) == 0) {
    const auto es = encoder_spec(encoder, spec.substr(8));
    if (toyenc::is_bag_kind(es.kind)) config_error("'" + spec + "' embeds scenes and has no Jacobian");
    return toyenc::make_builtin_oracle(es);
  }
  config_error("oracle must be builtin, builtin:KIND or adapter:CMD, got '" + spec + "'");
}

Json cmd_gen_probes(const Json& resolved) {
  const auto& o = resolved.at("gen_probes");
  const auto kind = probegen::parse_dataset_kind(o.at("kind").get<std::string>());
  if (!kind) config_error("--kind must be binding or samediff");
  const auto n = o.at("n").get<std::size_t>();
  if (n == 0) config_error("--n must be at least 1");
  const fs::path out = o.at("out").get<std::string>();
  const auto seed = o.at("seed").get<std::uint64_t>();

  const auto manifest = probegen::gen_dataset(*kind, n, seed, out);
  std::size_t images = 0;
  for (const auto& e : manifest.entries) images += e.images.size();
  write_outputs(out, "gen-probes", resolved, nullptr);

  Json r = result_header("gen-probes", "", resolved);
  r["kind"] = probegen::dataset_kind_name(*kind);
  r["n"] = n;
  r["seed"] = seed;
  r["images"] = images;
  r["manifest"] = (out / "manifest.json").string();
  return r;
}

Json cmd_embed(const Json& resolved) {
  const auto& o = resolved.at("embed");
  const auto manifest = probegen::load_manifest(required_path(o, "manifest", "--manifest"));
  const std::string oracle_spec = o.at("oracle").get<std::string>();
  const fs::path out = o.at("out").get<std::string>();
  const auto resize = o.at("resize").get<std::size_t>();
  const auto crop = o.at("crop").get<std::size_t>();
  if (crop == 0 || crop > resize) config_error("--crop must be in [1, --resize]");

  std::vector<std::string> ids;
  std::vector<fs::path> paths;
  std::vector<const probegen::SceneSpec*> scenes;
  for (const auto& e : manifest.entries)
    for (std::size_t i = 0; i < e.image_ids.size(); ++i) {
      ids.push_back(e.image_ids[i]);
      paths.push_back(manifest.base_dir / e.images[i]);
      scenes.push_back(i < e.scenes.size() ? &e.scenes[i] : nullptr);
    }

  geometry::RowMatrix rows;
  std::string kind = oracle_spec.rfind("builtin:", 0) == 0 ? oracle_spec.substr(8) : "";
  if (oracle_spec == "builtin") kind = resolved.at("encoder").at("kind").get<std::string>();
  if (toyenc::is_bag_kind(kind)) {
    const auto bag = toyenc::make_bag_encoder(encoder_spec(resolved.at("encoder"), kind));
    rows.resize(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(bag.dim()));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      require(scenes[i] != nullptr, ErrorCode::kFormat, "manifest image '" + ids[i] + "' has no scene");
      rows.row(static_cast<Eigen::Index>(i)) = bag.embed(*scenes[i]).transpose();
    }
  } else {
    const auto oracle = open_oracle(oracle_spec, resolved.at("encoder"));
    rows.resize(static_cast<Eigen::Index>(ids.size()), static_cast<Eigen::Index>(oracle->output_dim()));
    parallel_for(ids.size(), oracle->reentrant(), [&](std::size_t i) {
      probegen::Image img;
      try {
        img = probegen::read_png(paths[i]);
      } catch (const Error& e) {
        fail(e.code(), "image '" + ids[i] + "': " + e.what());
      }
      const auto x = preprocess(img, resize, crop, oracle->input_shape());
      rows.row(static_cast<Eigen::Index>(i)) = oracle->embed(x).transpose();
    });
  }

  const geometry::EmbeddingMatrix emb(std::move(rows), ids);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  geometry::write_emb1(out, emb);
  fs::path echo = out;
  echo.replace_extension(".config.toml");
  write_text(echo, echo_config("embed", resolved));

  Json r = result_header("embed", "", resolved);
  r["oracle"] = oracle_spec;
  r["rows"] = emb.rows();
  r["dim"] = emb.dim();
  r["out"] = out.string();
  return r;
}

Json cmd_metrics(const Json& resolved) {
  const auto& o = resolved.at("metrics");
  const std::string path = required_path(o, "embeddings", "--embeddings");
  const auto metric = geometry::parse_local_metric(o.at("formulation").get<std::string>());
  if (!metric) config_error("--formulation must be variance, effective_rank or participation_ratio");
  const auto seed = o.at("seed").get<std::uint64_t>();
  const auto emb = geometry::load_embeddings(path);
  emb.validate(2);

  const auto global_samples = o.at("global_samples").get<std::size_t>();
  geometry::SingularSpectrum spectrum;
  std::size_t global_rows = emb.rows();
  if (global_samples > 0 && emb.rows() > global_samples) {
    auto idx = geometry::sample_anchors(emb.rows(), global_samples, seed);
    std::sort(idx.begin(), idx.end());
    geometry::RowMatrix sub(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(emb.dim()));
    for (std::size_t i = 0; i < idx.size(); ++i)
      sub.row(static_cast<Eigen::Index>(i)) = emb.values().row(static_cast<Eigen::Index>(idx[i]));
    spectrum = geometry::covariance_spectrum(sub);
    global_rows = idx.size();
  } else {
    spectrum = geometry::covariance_spectrum(emb);
  }

  geometry::LocalIsotropyConfig lc;
  lc.k = o.at("local_k").get<std::size_t>();
  lc.n_anchors = o.at("anchors").get<std::size_t>();
  lc.metric = *metric;
  lc.seed = seed;
  lc.include_anchor = o.at("include_anchor").get<bool>();
  const auto local = geometry::local_isotropy(emb, lc);

  const std::string model = o.at("model").get<std::string>().empty() ? stem_label(path) : o.at("model").get<std::string>();
  Json r = result_header("metrics", model, resolved);
  r["n"] = emb.rows();
  r["dim"] = emb.dim();
  r["global_rows"] = global_rows;
  r["g_pr"] = geometry::participation_ratio(spectrum, true, emb.dim());
  r["g_pr_unnormalized"] = geometry::participation_ratio(spectrum, false, emb.dim());
  r["g_iso"] = geometry::isotropy_score(spectrum);
  r["effective_rank"] = geometry::effective_rank_entropy(spectrum);
  r["l_iso"] = local.mean;
  r["local"] = {{"k", lc.k}, {"anchors", lc.n_anchors}, {"formulation", geometry::local_metric_name(lc.metric)},
                {"include_anchor", lc.include_anchor}};
  if (o.at("sweep").get<bool>()) {
    const auto cells = geometry::local_isotropy_sweep(
        emb, o.at("sweep_k").get<std::vector<std::size_t>>(),
        {geometry::LocalMetric::kVariance, geometry::LocalMetric::kEffectiveRank,
         geometry::LocalMetric::kParticipationRatio},
        lc.n_anchors, seed);
    Json sweep = Json::array();
    for (const auto& c : cells)
      sweep.push_back({{"k", c.k}, {"formulation", geometry::local_metric_name(c.metric)}, {"value", c.value}});
    r["sweep"] = std::move(sweep);
  }
  write_outputs(o.at("out").get<std::string>(), "metrics", resolved, &r);
  return r;
}

Json cmd_jer(const Json& resolved) {
  const auto& o = resolved.at("jer");
  const std::string oracle_spec = o.at("oracle").get<std::string>();
  const auto oracle = open_oracle(oracle_spec, resolved.at("encoder"));

  jacobian::JerConfig cfg;
  cfg.n_images = o.at("images").get<std::size_t>();
  cfg.k = o.at("k").get<std::size_t>();
  cfg.seed = o.at("seed").get<std::uint64_t>();
  cfg.shared_directions = o.at("shared_directions").get<bool>();
  cfg.keep_spectra = true;
  if (cfg.n_images == 0) config_error("--images must be at least 1");
  if (cfg.k == 0) config_error("--k must be at least 1");
  const auto run = jacobian::jer_mean(*oracle, cfg);

  const std::string model = o.at("model").get<std::string>().empty() ? oracle_spec : o.at("model").get<std::string>();
  Json r = result_header("jer", model, resolved);
  r["oracle"] = oracle_spec;
  r["input_dim"] = oracle->input_shape().size();
  r["output_dim"] = oracle->output_dim();
  r["images"] = cfg.n_images;
  r["k"] = cfg.k;
  r["seed"] = cfg.seed;
  r["directions"] = cfg.shared_directions ? "shared" : "per_image";
  r["jer"] = run.mean;
  r["per_image"] = run.per_image;

  std::vector<double> mean_spec;
  for (const auto& s : run.spectra) {
    const auto ns = jacobian::normalized_spectrum(s);
    if (mean_spec.size() < ns.size()) mean_spec.resize(ns.size(), 0.0);
    for (std::size_t i = 0; i < ns.size(); ++i) mean_spec[i] += ns[i] / static_cast<double>(run.spectra.size());
  }
  r["spectrum_normalized_mean"] = mean_spec;

  const std::string spectrum_out = o.at("spectrum_out").get<std::string>();
  if (!spectrum_out.empty()) {
    std::string csv = "image_index,sv_index,sigma,sigma_normalized\n";
    for (std::size_t i = 0; i < run.spectra.size(); ++i) {
      const auto ns = jacobian::normalized_spectrum(run.spectra[i]);
      for (std::size_t j = 0; j < ns.size(); ++j) {
        std::ostringstream line;
        line.precision(10);
        line << i << ',' << j << ',' << run.spectra[i].values[j] << ',' << ns[j] << '\n';
        csv += line.str();
      }
    }
    write_text(spectrum_out, csv);
    r["spectrum_out"] = spectrum_out;
  }

  if (o.at("depth_profile").get<bool>()) {
    Json profile = Json::array();
    std::size_t layer = 0;
    for (const auto& [tap, value] : jacobian::jer_depth_profile(*oracle, cfg))
      profile.push_back({{"layer_index", layer++}, {"tap", tap}, {"jer", value}});
    r["depth_profile"] = std::move(profile);
  }

  const auto seeds = o.at("seeds").get<std::vector<std::uint64_t>>();
  if (!seeds.empty()) {
    std::vector<double> means;
    for (auto s : seeds) {
      auto c = cfg;
      c.seed = s;
      c.keep_spectra = false;
      means.push_back(jacobian::jer_mean(*oracle, c).mean);
    }
    const auto st = stats::seed_stability(means);
    r["stability"] = {{"seeds", seeds}, {"means", means}, {"mean", st.mean}, {"std", st.std},
                      {"cv", st.cv},     {"ci95", st.ci95}, {"ci95_normal", st.ci95_normal}};
  }
  write_outputs(o.at("out").get<std::string>(), "jer", resolved, &r);
  return r;
}

Json cmd_eval(const Json& resolved) {
  const auto& o = resolved.at("eval");
  const auto task = o.at("task").get<std::string>();
  if (task != "binding" && task != "samediff") config_error("--task must be binding or samediff");
  const auto kind = readout::parse_readout_kind(o.at("readout").get<std::string>());
  if (!kind) config_error("--readout must be cosine, knn or localpca");

  const auto manifest = probegen::load_manifest(required_path(o, "manifest", "--manifest"));
  const std::string emb_path = required_path(o, "embeddings", "--embeddings");
  const auto emb = geometry::load_embeddings(emb_path);
  const auto expected = task == "binding" ? probegen::DatasetKind::kBinding : probegen::DatasetKind::kSameDiff;
  require(manifest.kind == expected, ErrorCode::kInvalidArgument,
          "--task " + task + " does not match a " + std::string(probegen::dataset_kind_name(manifest.kind)) +
              " manifest");

  readout::ReadoutConfig rc;
  rc.kind = *kind;
  rc.knn_k = o.at("k").get<std::size_t>();
  rc.components = o.at("components").get<std::size_t>();
  rc.neighborhood = o.at("neighborhood").get<std::size_t>();
  std::optional<geometry::EmbeddingMatrix> pool;
  if (const auto p = o.at("pool").get<std::string>(); !p.empty()) {
    pool = geometry::load_embeddings(p);
    rc.pool = &*pool;
  }
  const auto res = task == "binding" ? readout::eval_binding(manifest, emb, rc) : readout::eval_samediff(manifest, emb, rc);

  const std::string model = o.at("model").get<std::string>().empty() ? stem_label(emb_path) : o.at("model").get<std::string>();
  Json r = result_header("eval", model, resolved);
  const Json body = Json::parse(readout::result_to_json(res));
  for (const auto& [k, v] : body.items()) r[k] = v;
  write_outputs(o.at("out").get<std::string>(), "eval", resolved, &r);
  return r;
}

Json cmd_correlate(const Json& resolved) {
  const auto& o = resolved.at("correlate");
  auto records = stats::load_records(required_path(o, "records", "--records"));
  if (const auto d = o.at("dims").get<std::string>(); !d.empty()) stats::join_covariates(records, stats::load_records(d));
  const auto xs = o.at("x").get<std::vector<std::string>>();
  if (xs.empty()) config_error("--x needs at least one column");
  const auto y_key = o.at("y").get<std::string>();
  const auto alpha = o.at("alpha").get<double>();
  if (!(alpha > 0.0 && alpha < 1.0)) config_error("--alpha must be in (0, 1)");

  const auto x = stats::column(records, xs[0]);
  const auto y = stats::column(records, y_key);
  const auto pr = stats::pearson(x, y);

  Json r = result_header("correlate", "", resolved);
  r["x"] = xs;
  r["y"] = y_key;
  r["n"] = pr.n;
  r["pearson"] = {{"r", pr.r}, {"p", pr.p}, {"n", pr.n}};

  std::optional<std::vector<double>> z;
  const auto control = o.at("control").get<std::string>();
  if (!control.empty()) {
    z = stats::column(records, control);
    const auto pc = stats::partial_correlation(x, y, *z);
    r["partial"] = {{"control", control}, {"r", pc.r}, {"p", pc.p}, {"n", pc.n}};
  }
  if (o.at("loo").get<bool>()) {
    std::vector<std::vector<double>> cols;
    for (const auto& k : xs) cols.push_back(stats::column(records, k));
    const auto fit = stats::ols_r2(cols, y);
    r["ols"] = {{"coefficients", fit.coefficients}, {"r2", fit.r2}, {"loo_r2", stats::loo_cv_r2(cols, y)}};
  }
  if (o.at("jackknife").get<bool>()) {
    const auto jk = stats::jackknife_significance(x, y, alpha, z);
    Json folds = Json::array();
    for (std::size_t i = 0; i < jk.folds.size(); ++i)
      folds.push_back({{"dropped", records[i].name + " " + records[i].architecture},
                       {"r", jk.folds[i].r},
                       {"p", jk.folds[i].p}});
    r["jackknife"] = {{"alpha", alpha}, {"control", control}, {"retained", jk.retained},
                      {"folds", jk.folds.size()}, {"per_fold", std::move(folds)}};
  }
  write_outputs(o.at("out").get<std::string>(), "correlate", resolved, &r);
  return r;
}

Json run_command(const std::string& command, const Json& resolved) {
  if (command == "gen-probes") return cmd_gen_probes(resolved);
  if (command == "embed") return cmd_embed(resolved);
  if (command == "metrics") return cmd_metrics(resolved);
  if (command == "jer") return cmd_jer(resolved);
  if (command == "eval") return cmd_eval(resolved);
  if (command == "correlate") return cmd_correlate(resolved);
  if (command == "report") return cmd_report(resolved);
  config_error("unknown command '" + command + "'");
}

}  // namespace sensorank::pipeline
