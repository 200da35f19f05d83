#include "aict/scenario_io.hpp"

#include <filesystem>

#include <yaml-cpp/yaml.h>

#include "aict/presets.hpp"

namespace aict {
namespace {

[[noreturn]] void fail(const std::string& path, const YAML::Node& node,
                       const std::string& what) {
  throw ConfigError(path + ":" + std::to_string(node.Mark().line + 1) + ": " +
                    what);
}

double get_scalar(const std::string& path, const YAML::Node& node,
                  const std::string& key, double fallback) {
  if (!node[key]) return fallback;
  try {
    return node[key].as<double>();
  } catch (const YAML::Exception&) {
    fail(path, node[key], "field '" + key + "' must be a number");
  }
}

JointVector get_vector(const std::string& path, const YAML::Node& node,
                       const std::string& key, int n,
                       const JointVector& fallback) {
  if (!node[key]) return fallback;
  const YAML::Node& v = node[key];
  // A scalar broadcasts to all joints.
  if (v.IsScalar()) {
    try {
      return JointVector::Constant(n, v.as<double>());
    } catch (const YAML::Exception&) {
      fail(path, v, "field '" + key + "' must be a number or list");
    }
  }
  if (!v.IsSequence()) {
    fail(path, v, "field '" + key + "' must be a number or list");
  }
  JointVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      out[static_cast<Eigen::Index>(i)] = v[i].as<double>();
    } catch (const YAML::Exception&) {
      fail(path, v[i], "field '" + key + "' has a non-numeric entry");
    }
  }
  if (out.size() != n) {
    fail(path, v,
         "field '" + key + "' needs " + std::to_string(n) + " entries, got " +
             std::to_string(out.size()));
  }
  return out;
}

std::variant<PlanarArmModel, DecoupledPlantModel> parse_plant(
    const std::string& path, const YAML::Node& node) {
  const std::string type =
      node["type"] ? node["type"].as<std::string>() : "planar_arm";

  if (type == "decoupled") {
    if (!node["dofs"]) fail(path, node, "decoupled plant needs 'dofs'");
    const int n = node["dofs"].as<int>();
    DecoupledPlantModel model = decoupled_plant(n);
    model.inertia = get_vector(path, node, "inertia", n, model.inertia);
    model.damping = get_vector(path, node, "damping", n, model.damping);
    model.bias = get_vector(path, node, "bias", n, model.bias);
    return model;
  }
  if (type != "planar_arm") {
    fail(path, node["type"], "unknown plant type '" + type + "'");
  }

  PlanarArmModel model;
  const YAML::Node& links = node["links"];
  if (!links || !links.IsSequence() || links.size() == 0) {
    fail(path, node, "planar arm needs a non-empty 'links' list");
  }
  model.links.clear();
  std::vector<double> damping;
  for (const YAML::Node& ln : links) {
    LinkParams link;
    link.mass = get_scalar(path, ln, "mass", 1.0);
    link.length = get_scalar(path, ln, "length", 0.5);
    link.com = get_scalar(path, ln, "com", link.length / 2.0);
    link.inertia = get_scalar(path, ln, "inertia",
                              link.mass * link.length * link.length / 12.0);
    damping.push_back(get_scalar(path, ln, "damping", 0.0));
    model.links.push_back(link);
  }
  model.damping = Eigen::Map<JointVector>(damping.data(),
                                          static_cast<Eigen::Index>(damping.size()));
  model.gravity = get_scalar(path, node, "gravity", 9.81);
  model.gravity_compensated =
      node["gravity_compensated"] && node["gravity_compensated"].as<bool>();
  model.payload_mass = get_scalar(path, node, "payload_mass", 0.0);

  if (node["mass_perturbation"]) {
    const YAML::Node& p = node["mass_perturbation"];
    model = perturb_masses(
        model, get_scalar(path, p, "fraction", 0.0),
        static_cast<std::uint64_t>(get_scalar(path, p, "seed", 0.0)));
  }
  return model;
}

AicConfig parse_aic(const std::string& path, const YAML::Node& node,
                    double dt) {
  AicConfig cfg = aic_preset();
  cfg.dt = dt;
  if (!node) return cfg;
  cfg.prec.sigma_q = get_scalar(path, node, "sigma_q", cfg.prec.sigma_q);
  cfg.prec.sigma_qd = get_scalar(path, node, "sigma_qd", cfg.prec.sigma_qd);
  cfg.prec.sigma_mu = get_scalar(path, node, "sigma_mu", cfg.prec.sigma_mu);
  cfg.prec.sigma_mup = get_scalar(path, node, "sigma_mup", cfg.prec.sigma_mup);
  cfg.kappa_mu = get_scalar(path, node, "kappa_mu", cfg.kappa_mu);
  cfg.kappa_a = get_scalar(path, node, "kappa_a", cfg.kappa_a);
  cfg.c_q = get_scalar(path, node, "c_q", cfg.c_q);
  cfg.c_qd = get_scalar(path, node, "c_qd", cfg.c_qd);
  cfg.torque_limit = get_scalar(path, node, "torque_limit", cfg.torque_limit);
  return cfg;
}

MracConfig parse_mrac(const std::string& path, const YAML::Node& node, int n,
                      double dt) {
  MracConfig cfg = mrac_preset(n);
  cfg.dt = dt;
  if (!node) return cfg;
  cfg.zeta = get_scalar(path, node, "zeta", cfg.zeta);
  cfg.omega = get_vector(path, node, "omega", n, cfg.omega);
  std::tie(cfg.P2, cfg.P3) =
      MracConfig::default_error_weights(cfg.omega, cfg.zeta);
  cfg.E01 = get_vector(path, node, "E01", n, cfg.E01);
  cfg.E02 = get_vector(path, node, "E02", n, cfg.E02);
  cfg.E11 = get_vector(path, node, "E11", n, cfg.E11);
  cfg.E12 = get_vector(path, node, "E12", n, cfg.E12);
  cfg.F01 = get_vector(path, node, "F01", n, cfg.F01);
  cfg.F02 = get_vector(path, node, "F02", n, cfg.F02);
  cfg.F11 = get_vector(path, node, "F11", n, cfg.F11);
  cfg.F12 = get_vector(path, node, "F12", n, cfg.F12);
  cfg.alpha1 = get_vector(path, node, "alpha1", n, cfg.alpha1);
  cfg.alpha2 = get_vector(path, node, "alpha2", n, cfg.alpha2);
  cfg.P2 = get_vector(path, node, "P2", n, cfg.P2);
  cfg.P3 = get_vector(path, node, "P3", n, cfg.P3);
  cfg.torque_limit = get_scalar(path, node, "torque_limit", cfg.torque_limit);
  return cfg;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("config file not found: " + path);
  }

  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ": " +
                      e.msg);
  }

  try {
    Scenario scn;
    scn.name = root["name"] ? root["name"].as<std::string>()
                            : std::filesystem::path(path).stem().string();

    if (!root["plant"]) fail(path, root, "missing 'plant' section");
    scn.plant = parse_plant(path, root["plant"]);
    const int n = scn.dofs();

    const std::string kind =
        root["controller"] ? root["controller"].as<std::string>() : "aic";
    if (kind == "aic") {
      scn.controller = ControllerKind::kAic;
    } else if (kind == "mrac") {
      scn.controller = ControllerKind::kMrac;
    } else {
      fail(path, root["controller"], "controller must be 'aic' or 'mrac'");
    }

    scn.duration = get_scalar(path, root, "duration", 0.0);
    scn.dt = get_scalar(path, root, "dt", 1e-3);
    scn.initial_q =
        get_vector(path, root, "initial_q", n, JointVector::Zero(n));

    if (root["noise"]) {
      const YAML::Node& nz = root["noise"];
      scn.noise.std_q = get_scalar(path, nz, "std_q", 0.0);
      scn.noise.std_qd = get_scalar(path, nz, "std_qd", 0.0);
      scn.noise.seed =
          static_cast<std::uint64_t>(get_scalar(path, nz, "seed", 0.0));
    }

    if (root["schedule"]) {
      for (const YAML::Node& sp : root["schedule"]) {
        SetPoint s;
        s.t = get_scalar(path, sp, "t", 0.0);
        s.target = get_vector(path, sp, "q", n, JointVector::Zero(n));
        if (!sp["q"]) fail(path, sp, "schedule entry needs 'q'");
        scn.schedule.push_back(std::move(s));
      }
    }

    if (root["events"]) {
      const YAML::Node& ev = root["events"];
      if (ev["pushes"]) {
        for (const YAML::Node& p : ev["pushes"]) {
          PushEvent push;
          push.t_start = get_scalar(path, p, "t", 0.0);
          push.duration = get_scalar(path, p, "duration", 0.0);
          push.torque = get_vector(path, p, "torque", n, JointVector::Zero(n));
          scn.pushes.push_back(std::move(push));
        }
      }
      if (ev["payloads"]) {
        for (const YAML::Node& p : ev["payloads"]) {
          PayloadEvent payload;
          payload.t = get_scalar(path, p, "t", 0.0);
          payload.mass = get_scalar(path, p, "mass", 0.0);
          scn.payload_events.push_back(payload);
        }
      }
    }

    scn.aic = parse_aic(path, root["aic"], scn.dt);
    scn.mrac = parse_mrac(path, root["mrac"], n, scn.dt);

    scn.validate();
    return scn;
  } catch (const YAML::Exception& e) {
    throw ConfigError(path + ":" + std::to_string(e.mark.line + 1) + ": " +
                      e.msg);
  }
}

}  // namespace aict
