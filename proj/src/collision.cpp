#include "kdbench/collision.hpp"

#include "kdbench/errors.hpp"
#include "kdbench/kinematics.hpp"

namespace kdbench {

std::vector<PlacedCapsule> place_capsules(const KinematicChain& chain, const JointState& q) {
  const ChainFrames frames = chain_frames(chain, q);
  std::vector<PlacedCapsule> out;
  out.reserve(chain.capsules.size());
  for (std::size_t c = 0; c < chain.capsules.size(); ++c) {
    const CapsuleSpec& spec = chain.capsules[c];
    const auto frame = chain.frame_index(spec.attached_joint);
    if (!frame) {
      throw ParameterError("capsule " + std::to_string(c) + " attached to unknown joint '" +
                           spec.attached_joint + "'");
    }
    const Posed pose = *frame < 0 ? Posed::Identity() : frames.joints[static_cast<std::size_t>(*frame)];
    out.push_back({pose.apply(spec.a), pose.apply(spec.b), spec.radius, c});
  }
  return out;
}

CollisionResult check_self_collision(const KinematicChain& chain,
                                     const std::vector<PlacedCapsule>& placed) {
  for (std::size_t i = 0; i < placed.size(); ++i) {
    for (std::size_t j = i + 1; j < placed.size(); ++j) {
      const std::size_t si = placed[i].source_index;
      const std::size_t sj = placed[j].source_index;
      if (chain.exempt(si, sj)) continue;
      const double d = segment_distance(placed[i].a, placed[i].b, placed[j].a, placed[j].b);
      if (d < placed[i].radius + placed[j].radius) {
        return {true, CapsulePair{std::min(si, sj), std::max(si, sj)}};
      }
    }
  }
  return {};
}

CollisionResult check_self_collision(const KinematicChain& chain, const JointState& q) {
  return check_self_collision(chain, place_capsules(chain, q));
}

}  // namespace kdbench
