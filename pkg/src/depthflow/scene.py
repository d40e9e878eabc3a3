"""Procedural 3-d scenes rendered by analytic raycasting, with exact
spherical-depth ground truth.

World frame: x forward, y left, z up; the ground is the z = 0 plane. A
camera pose is a position plus (roll, pitch, yaw) in radians -- yaw about
world z, positive pitch looking up, roll about the optical axis -- together
with pinhole intrinsics. Depth ground truth is spherical: the Euclidean
distance from the camera center to the first surface hit, which a closed-form
per-pixel factor converts to planar (optical-axis) depth and back.

Stored depth is 16-bit grayscale: level = round(depth / scale_factor), with
level 0 reserved for invalid pixels (sky, or hits beyond the range ceiling).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_EPS = 1e-9


@dataclass(frozen=True)
class Texture:
    """Smooth procedural albedo modulation evaluated at world hit points.

    Optical flow needs intensity structure inside surfaces; flat-shaded
    primitives would leave it unconstrained there. The amplitude fades with
    the texture frequency projected into the pixel footprint (a one-tap
    mipmap stand-in), otherwise distant surfaces point-sample to aliasing
    noise instead of image structure.
    """

    amp: float
    freq: tuple  # rad/m per world axis
    phase: tuple

    def modulation(self, points: np.ndarray, footprint=None) -> np.ndarray:
        s = np.ones(points.shape[0])
        for axis in range(3):
            s = s * np.sin(self.freq[axis] * points[:, axis] + self.phase[axis])
        amp = self.amp
        if footprint is not None:
            k = float(np.linalg.norm(self.freq))
            amp = amp * np.exp(-0.5 * (k * footprint) ** 2)
        return 1.0 + amp * s

    @classmethod
    def sample(cls, rng) -> "Texture":
        lam = rng.uniform(1.2, 5.0, size=3)  # wavelength, m
        return cls(amp=float(rng.uniform(0.3, 0.55)),
                   freq=tuple(2 * np.pi / lam),
                   phase=tuple(rng.uniform(0, 2 * np.pi, size=3)))


@dataclass(frozen=True)
class Intrinsics:
    f: float
    cx: float
    cy: float
    width: int
    height: int

    @classmethod
    def default(cls, width: int = 320, height: int = 96) -> "Intrinsics":
        return cls(f=0.55 * width, cx=width / 2.0, cy=height / 2.0,
                   width=width, height=height)

    def ray_factors(self):
        """Per-pixel (a, b) tangent offsets and the spherical/planar factor
        sqrt(1 + a^2 + b^2)."""
        xs = np.arange(self.width, dtype=float)
        ys = np.arange(self.height, dtype=float)
        a = (xs[None, :] - self.cx) / self.f
        b = (ys[:, None] - self.cy) / self.f
        a = np.broadcast_to(a, (self.height, self.width))
        b = np.broadcast_to(b, (self.height, self.width))
        return a, b, np.sqrt(1.0 + a ** 2 + b ** 2)


@dataclass
class CameraPose:
    position: np.ndarray  # (3,) meters
    roll: float
    pitch: float
    yaw: float
    intrinsics: Intrinsics

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        if self.position.shape != (3,):
            raise ValueError("position must be a 3-vector")

    def rotation(self) -> np.ndarray:
        cr, sr = np.cos(self.roll), np.sin(self.roll)
        cp, sp = np.cos(self.pitch), np.sin(self.pitch)
        cy, sy = np.cos(self.yaw), np.sin(self.yaw)
        rx = np.array([[1, 0, 0], [0, cr, -sr], [0, sr, cr]])
        ry = np.array([[cp, 0, -sp], [0, 1, 0], [sp, 0, cp]])  # +pitch looks up
        rz = np.array([[cy, -sy, 0], [sy, cy, 0], [0, 0, 1]])
        return rz @ ry @ rx

    def basis(self):
        """(forward, right, down) unit vectors in world coordinates."""
        m = self.rotation()
        return m @ np.array([1.0, 0, 0]), m @ np.array([0, -1.0, 0]), m @ np.array([0, 0, -1.0])

    def pose6(self) -> tuple:
        p = self.position
        return (float(p[0]), float(p[1]), float(p[2]),
                float(self.roll), float(self.pitch), float(self.yaw))


@dataclass
class Sphere:
    center: np.ndarray
    radius: float
    albedo: np.ndarray
    texture: Texture | None = None

    def intersect(self, origin, dirs):
        oc = origin - np.asarray(self.center, dtype=float)
        b = dirs @ oc
        c = oc @ oc - self.radius ** 2
        disc = b ** 2 - c
        ok = disc > 0
        sq = np.sqrt(np.where(ok, disc, 0.0))
        t = -b - sq
        t = np.where(ok & (t > _EPS), t, np.inf)
        hit = np.isfinite(t)
        p = origin + dirs * np.where(hit, t, 0.0)[:, None]
        normals = np.where(hit[:, None], (p - self.center) / self.radius, 0.0)
        return t, normals


@dataclass
class Box:
    lo: np.ndarray
    hi: np.ndarray
    albedo: np.ndarray
    texture: Texture | None = None

    def intersect(self, origin, dirs):
        lo = np.asarray(self.lo, dtype=float)
        hi = np.asarray(self.hi, dtype=float)
        d = np.where(np.abs(dirs) < 1e-12, 1e-12, dirs)
        t1 = (lo - origin) / d
        t2 = (hi - origin) / d
        tlo = np.minimum(t1, t2)
        thi = np.maximum(t1, t2)
        tmin = tlo.max(axis=1)
        tmax = thi.min(axis=1)
        ok = (tmax >= tmin) & (tmin > _EPS)
        t = np.where(ok, tmin, np.inf)
        axis = tlo.argmax(axis=1)
        normals = np.zeros_like(dirs)
        rows = np.arange(dirs.shape[0])
        normals[rows, axis] = -np.sign(dirs[rows, axis])
        normals[~ok] = 0.0
        return t, normals


@dataclass
class Cylinder:
    """Vertical cylinder with closed caps."""

    center_xy: tuple
    radius: float
    z0: float
    z1: float
    albedo: np.ndarray
    texture: Texture | None = None

    def intersect(self, origin, dirs):
        cx0, cy0 = self.center_xy
        ox, oy = origin[0] - cx0, origin[1] - cy0
        dx, dy, dz = dirs[:, 0], dirs[:, 1], dirs[:, 2]
        a = dx ** 2 + dy ** 2
        b = 2 * (ox * dx + oy * dy)
        c = ox ** 2 + oy ** 2 - self.radius ** 2
        disc = b ** 2 - 4 * a * c
        ok = (disc > 0) & (a > 1e-12)
        sq = np.sqrt(np.where(ok, disc, 0.0))
        t_lat = np.where(ok, (-b - sq) / (2 * np.where(ok, a, 1.0)), np.inf)
        z_at = origin[2] + np.where(ok, t_lat, 0.0) * dz
        lat_ok = ok & (t_lat > _EPS) & (z_at >= self.z0) & (z_at <= self.z1)
        t_lat = np.where(lat_ok, t_lat, np.inf)

        dzs = np.where(np.abs(dz) < 1e-12, 1e-12, dz)
        best_t = t_lat
        best_kind = np.where(lat_ok, 0, -1)
        for kind, zc in ((1, self.z1), (2, self.z0)):
            t_cap = (zc - origin[2]) / dzs
            px = origin[0] + t_cap * dx - cx0
            py = origin[1] + t_cap * dy - cy0
            cap_ok = (t_cap > _EPS) & (px ** 2 + py ** 2 <= self.radius ** 2)
            closer = cap_ok & (t_cap < best_t)
            best_t = np.where(closer, t_cap, best_t)
            best_kind = np.where(closer, kind, best_kind)

        normals = np.zeros_like(dirs)
        lat = best_kind == 0
        if lat.any():
            p = origin + dirs[lat] * best_t[lat, None]
            n = np.stack([p[:, 0] - cx0, p[:, 1] - cy0, np.zeros(p.shape[0])], axis=1)
            normals[lat] = n / self.radius
        normals[best_kind == 1] = (0, 0, 1)
        normals[best_kind == 2] = (0, 0, -1)
        return best_t, normals


@dataclass
class Plane:
    """Infinite two-sided plane through `point` with unit normal `normal`."""

    point: np.ndarray
    normal: np.ndarray
    albedo: np.ndarray
    texture: Texture | None = None

    def intersect(self, origin, dirs):
        n = np.asarray(self.normal, dtype=float)
        n = n / np.linalg.norm(n)
        denom = dirs @ n
        safe = np.where(np.abs(denom) < 1e-12, 1e-12, denom)
        t = ((np.asarray(self.point, dtype=float) - origin) @ n) / safe
        ok = (np.abs(denom) > 1e-12) & (t > _EPS)
        t = np.where(ok, t, np.inf)
        normals = np.where(ok[:, None], -np.sign(safe)[:, None] * n[None, :], 0.0)
        return t, normals


@dataclass
class Scene:
    primitives: list
    ground: Plane | None
    light_dir: np.ndarray  # unit vector, direction the light travels
    ambient: float
    brightness: float
    haze_beta: float  # 1/m, 0 disables haze
    sky_color: np.ndarray
    motion_blur: bool
    seed: int

    def all_surfaces(self):
        return ([self.ground] if self.ground is not None else []) + list(self.primitives)


@dataclass
class DepthMap:
    values: np.ndarray  # (H, W) meters; 0 on invalid pixels
    convention: str  # "spherical" | "planar"
    max_range: float
    valid: np.ndarray  # (H, W) bool

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.valid = np.asarray(self.valid, dtype=bool)
        if self.values.shape != self.valid.shape:
            raise ValueError("values and valid mask must share a shape")
        if self.convention not in ("spherical", "planar"):
            raise ValueError(f"unknown depth convention {self.convention!r}")


@dataclass(frozen=True)
class SceneConfig:
    sparse_count: tuple = (5, 20)
    dense_count: tuple = (50, 80)
    x_range: tuple = (4.0, 70.0)
    y_range: tuple = (-30.0, 30.0)
    haze_probability: float = 0.3
    motion_blur_probability: float = 0.3


def _random_albedo(rng):
    return 0.25 + 0.7 * rng.uniform(size=3)


def generate_scene(seed: int, difficulty: str = "sparse",
                   config: SceneConfig = SceneConfig()) -> Scene:
    """Deterministic scene from a seed: ground plane plus boxes, cylinders and
    spheres scattered ahead of the origin, with one primitive guaranteed to
    sit in the default forward frustum."""
    if difficulty not in ("sparse", "urban-dense"):
        raise ValueError(f"unknown difficulty {difficulty!r}")
    rng = np.random.default_rng(seed)
    lo, hi = config.sparse_count if difficulty == "sparse" else config.dense_count
    count = int(rng.integers(lo, hi + 1))

    prims = []
    # anchor obstacle straight ahead of the default trajectory start
    ax = rng.uniform(8.0, 14.0)
    ay = rng.uniform(-2.0, 2.0)
    aw, ad, ah = rng.uniform(1.0, 3.0, size=3) * (1, 1, 2)
    prims.append(Box(lo=np.array([ax, ay - aw / 2, 0.0]),
                     hi=np.array([ax + ad, ay + aw / 2, ah]),
                     albedo=_random_albedo(rng), texture=Texture.sample(rng)))
    while len(prims) < count:
        kind = rng.integers(0, 3)
        x = rng.uniform(*config.x_range)
        y = rng.uniform(*config.y_range)
        if kind == 0:
            w, d = rng.uniform(0.8, 5.0, size=2)
            h = rng.uniform(1.5, 10.0)
            # some boxes hang above the ground, overpass-style: monocular
            # size/contact cues cannot place them, motion parallax can
            z0 = rng.uniform(0.5, 5.0) if rng.uniform() < 0.3 else 0.0
            prims.append(Box(lo=np.array([x, y - w / 2, z0]),
                             hi=np.array([x + d, y + w / 2, z0 + h]),
                             albedo=_random_albedo(rng),
                             texture=Texture.sample(rng)))
        elif kind == 1:
            r = rng.uniform(0.15, 0.6)
            h = rng.uniform(2.0, 7.0)
            prims.append(Cylinder(center_xy=(x, y), radius=r, z0=0.0, z1=h,
                                  albedo=_random_albedo(rng),
                                  texture=Texture.sample(rng)))
        else:
            r = rng.uniform(0.4, 2.0)
            zc = rng.uniform(max(r, 0.5), 7.0) if rng.uniform() < 0.6 else r
            prims.append(Sphere(center=np.array([x, y, zc]), radius=r,
                                albedo=_random_albedo(rng),
                                texture=Texture.sample(rng)))

    light = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1), -rng.uniform(0.8, 2.0)])
    light /= np.linalg.norm(light)
    haze = float(rng.uniform(0.008, 0.03)) if rng.uniform() < config.haze_probability else 0.0
    blur = bool(rng.uniform() < config.motion_blur_probability)
    ground = Plane(point=np.zeros(3), normal=np.array([0.0, 0, 1]),
                   albedo=np.array([0.35, 0.4, 0.3]) * rng.uniform(0.7, 1.2),
                   texture=Texture.sample(rng))
    return Scene(primitives=prims, ground=ground, light_dir=light,
                 ambient=float(rng.uniform(0.25, 0.45)),
                 brightness=float(rng.uniform(0.7, 1.1)),
                 haze_beta=haze,
                 sky_color=np.array([0.65, 0.78, 0.92]) * rng.uniform(0.8, 1.05),
                 motion_blur=blur, seed=int(seed))


@dataclass(frozen=True)
class TrajectoryConfig:
    mode: str = "roam"  # "roam" | "straight"
    max_speed: float = 8.0  # m/s
    dt: float = 0.1  # s, 10 Hz capture
    roll_amplitude_deg: tuple = (18.0, 28.0)
    pitch_amplitude_deg: tuple = (5.0, 11.0)
    height_range: tuple = (1.2, 3.5)
    # crab angle (rad) between heading and velocity in straight mode; nonzero
    # values give every frame pair lateral parallax
    straight_drift: float = 0.0
    # scales the roam mode's roll/pitch amplitudes and yaw wander; small
    # values make the motion translation-dominant
    rotation_scale: float = 1.0
    # vertical speed amplitude (m/s) of the roam mode's altitude oscillation
    height_wander: float = 0.8
    intrinsics: Intrinsics = field(default_factory=Intrinsics.default)


def sample_trajectory(scene: Scene, n_frames: int, seed: int,
                      config: TrajectoryConfig = TrajectoryConfig()) -> list:
    """Smooth 6-DoF camera path at 10 Hz.

    Roam mode wanders forward through the scene with lateral drift (so
    consecutive frames carry parallax) and oscillating roll/pitch whose
    amplitudes exceed 15 degrees in roll; straight mode flies a constant
    velocity with fixed orientation. Per-frame displacement never exceeds
    max_speed * dt.
    """
    if n_frames < 2:
        raise ValueError("a trajectory needs at least 2 frames")
    rng = np.random.default_rng(seed)
    intr = config.intrinsics
    poses = []
    if config.mode == "straight":
        z = rng.uniform(*config.height_range)
        pos = np.array([0.0, rng.uniform(-2, 2), z])
        speed = 0.6 * config.max_speed
        vel = speed * np.array([np.cos(config.straight_drift),
                                np.sin(config.straight_drift), 0.0])
        for _ in range(n_frames):
            poses.append(CameraPose(position=pos.copy(), roll=0.0, pitch=0.0,
                                    yaw=0.0, intrinsics=intr))
            pos = pos + vel * config.dt
        return poses
    if config.mode != "roam":
        raise ValueError(f"unknown trajectory mode {config.mode!r}")

    roll_amp = config.rotation_scale * np.deg2rad(rng.uniform(*config.roll_amplitude_deg))
    pitch_amp = config.rotation_scale * np.deg2rad(rng.uniform(*config.pitch_amplitude_deg))
    roll_period = rng.uniform(2.5, 5.0)  # seconds
    pitch_period = rng.uniform(3.0, 6.0)
    roll_phase = rng.uniform(0, 2 * np.pi)
    pitch_phase = rng.uniform(0, 2 * np.pi)
    z_mid = rng.uniform(*config.height_range)
    pos = np.array([0.0, rng.uniform(-2.0, 2.0), z_mid])
    yaw = rng.uniform(-0.15, 0.15)
    yaw_rate = 0.0
    speed = rng.uniform(0.35, 0.7) * config.max_speed
    drift = rng.uniform(-0.5, 0.5)  # crab angle for lateral parallax

    for i in range(n_frames):
        t = i * config.dt
        roll = roll_amp * np.sin(2 * np.pi * t / roll_period + roll_phase)
        pitch = pitch_amp * np.sin(2 * np.pi * t / pitch_period + pitch_phase)
        poses.append(CameraPose(position=pos.copy(), roll=float(roll),
                                pitch=float(pitch), yaw=float(yaw),
                                intrinsics=intr))
        yaw_rate = 0.9 * yaw_rate + 0.1 * config.rotation_scale * rng.uniform(-0.6, 0.6)
        yaw += yaw_rate * config.dt
        drift += rng.uniform(-0.08, 0.08)
        drift = float(np.clip(drift, -0.7, 0.7))
        speed = float(np.clip(speed + rng.uniform(-0.3, 0.3),
                              0.2 * config.max_speed, 0.95 * config.max_speed))
        heading = yaw + drift
        vz = config.height_wander * np.sin(2 * np.pi * t / 9.0)
        vel = np.array([speed * np.cos(heading), speed * np.sin(heading), vz])
        norm = np.linalg.norm(vel)
        if norm > config.max_speed:
            vel *= config.max_speed / norm
        pos = pos + vel * config.dt
        pos[2] = float(np.clip(pos[2], 0.7, 6.0))
    return poses


def _ray_grid(pose: CameraPose):
    intr = pose.intrinsics
    a, b, _ = intr.ray_factors()
    fwd, right, down = pose.basis()
    dirs = (fwd[None, None, :] + a[..., None] * right[None, None, :]
            + b[..., None] * down[None, None, :])
    dirs = dirs / np.linalg.norm(dirs, axis=2, keepdims=True)
    return dirs.reshape(-1, 3)


def _trace(scene: Scene, origin, dirs, px_scale: float = 0.0):
    """px_scale is 1/f: the pixel footprint in meters at distance t is
    t * px_scale, used to prefilter procedural texture."""
    n = dirs.shape[0]
    best_t = np.full(n, np.inf)
    best_n = np.zeros((n, 3))
    best_alb = np.zeros((n, 3))
    for prim in scene.all_surfaces():
        t, normals = prim.intersect(origin, dirs)
        closer = t < best_t
        if closer.any():
            best_t = np.where(closer, t, best_t)
            best_n[closer] = normals[closer]
            alb = np.asarray(prim.albedo, dtype=float)
            if prim.texture is not None:
                pts = origin + dirs[closer] * t[closer, None]
                foot = t[closer] * px_scale
                best_alb[closer] = alb * prim.texture.modulation(pts, foot)[:, None]
            else:
                best_alb[closer] = alb
    return best_t, best_n, best_alb


def _shade(scene: Scene, t, normals, albedo):
    hit = np.isfinite(t)
    lambert = np.maximum(0.0, -(normals @ scene.light_dir))
    shade = scene.brightness * (scene.ambient + (1 - scene.ambient) * lambert)
    color = albedo * shade[:, None]
    if scene.haze_beta > 0:
        atten = np.exp(-scene.haze_beta * np.where(hit, t, 0.0))[:, None]
        color = color * atten + scene.sky_color[None, :] * (1 - atten)
    color[~hit] = scene.sky_color
    return np.clip(color, 0.0, 1.0)


def _render_color(scene: Scene, pose: CameraPose):
    dirs = _ray_grid(pose)
    intr = pose.intrinsics
    t, normals, albedo = _trace(scene, pose.position, dirs, px_scale=1.0 / intr.f)
    rgb = _shade(scene, t, normals, albedo).reshape(intr.height, intr.width, 3)
    return rgb, t.reshape(intr.height, intr.width)


def _interpolate_pose(a: CameraPose, b: CameraPose, alpha: float) -> CameraPose:
    lerp = lambda x, y: (1 - alpha) * x + alpha * y
    return CameraPose(position=lerp(a.position, b.position),
                      roll=lerp(a.roll, b.roll), pitch=lerp(a.pitch, b.pitch),
                      yaw=lerp(a.yaw, b.yaw), intrinsics=b.intrinsics)


MOTION_BLUR_SAMPLES = 5


def render(scene: Scene, pose: CameraPose, max_range: float = 40.0,
           prev_pose: CameraPose | None = None):
    """Raycast one frame; returns (rgb (H, W, 3) float in [0, 1], DepthMap).

    Depth is spherical, taken at the nominal pose, clamped to max_range with
    pixels beyond it (or hitting sky) masked invalid. When the scene asks for
    motion blur and a previous pose is given, the color image is the average
    of MOTION_BLUR_SAMPLES renders along the inter-frame segment.
    """
    rgb, t = _render_color(scene, pose)
    if scene.motion_blur and prev_pose is not None:
        acc = np.zeros_like(rgb)
        for k in range(MOTION_BLUR_SAMPLES):
            alpha = (k + 1) / MOTION_BLUR_SAMPLES
            sub = _interpolate_pose(prev_pose, pose, alpha)
            acc += _render_color(scene, sub)[0]
        rgb = acc / MOTION_BLUR_SAMPLES

    valid = np.isfinite(t) & (t <= max_range)
    values = np.where(valid, np.minimum(t, max_range), 0.0)
    depth = DepthMap(values=values, convention="spherical",
                     max_range=float(max_range), valid=valid)
    return rgb, depth


def spherical_to_planar(depth: DepthMap, intrinsics: Intrinsics) -> DepthMap:
    """Divide by the per-pixel ray obliquity factor sqrt(1 + a^2 + b^2)."""
    if depth.convention != "spherical":
        raise ValueError(f"expected spherical depth, got {depth.convention}")
    _, _, factor = intrinsics.ray_factors()
    return DepthMap(values=depth.values / factor, convention="planar",
                    max_range=depth.max_range, valid=depth.valid.copy())


def planar_to_spherical(depth: DepthMap, intrinsics: Intrinsics) -> DepthMap:
    if depth.convention != "planar":
        raise ValueError(f"expected planar depth, got {depth.convention}")
    _, _, factor = intrinsics.ray_factors()
    return DepthMap(values=depth.values * factor, convention="spherical",
                    max_range=depth.max_range, valid=depth.valid.copy())


GRAY16_MAX = 65535


def encode_depth(depth: DepthMap, scale_factor: float) -> np.ndarray:
    """Quantize to 16-bit gray levels; invalid pixels become the reserved 0.

    Valid levels are clamped to [1, 65535] so validity survives the round
    trip; decode error is at most scale_factor / 2.
    """
    if depth.max_range / scale_factor > GRAY16_MAX + 0.5:
        raise ValueError(
            f"max_range {depth.max_range} overflows 16-bit at scale {scale_factor}"
        )
    levels = np.round(depth.values / scale_factor)
    levels = np.clip(levels, 1, GRAY16_MAX)
    levels = np.where(depth.valid, levels, 0)
    return levels.astype(np.uint16)


def decode_depth(levels: np.ndarray, scale_factor: float, max_range: float,
                 convention: str = "spherical") -> DepthMap:
    levels = np.asarray(levels)
    valid = levels > 0
    values = np.where(valid, levels.astype(float) * scale_factor, 0.0)
    return DepthMap(values=values, convention=convention,
                    max_range=float(max_range), valid=valid)


def calibrate_scale(levels: np.ndarray, known_distance: float,
                    intrinsics: Intrinsics) -> float:
    """Recover meters-per-level from a toy rendering of a frontal plane at a
    known distance.

    Each valid pixel's spherical distance to the plane is known in closed
    form (distance times the ray obliquity factor), so the scale is the
    least-squares fit of level * scale to that expectation over all valid
    pixels, which averages away the quantization noise.
    """
    _, _, factor = intrinsics.ray_factors()
    valid = np.asarray(levels) > 0
    if not valid.any():
        raise ValueError("no valid pixels hit the calibration plane")
    lv = np.asarray(levels, dtype=float)[valid]
    expect = known_distance * factor[valid]
    return float(np.sum(lv * expect) / np.sum(lv * lv))


def toy_calibration_scene(distance: float) -> tuple:
    """A wall-only scene facing the default camera, for scale calibration."""
    wall = Plane(point=np.array([distance, 0.0, 0.0]),
                 normal=np.array([-1.0, 0.0, 0.0]),
                 albedo=np.array([0.8, 0.8, 0.8]))
    scene = Scene(primitives=[wall], ground=None,
                  light_dir=np.array([0.0, 0.0, -1.0]), ambient=0.4,
                  brightness=1.0, haze_beta=0.0,
                  sky_color=np.array([0.7, 0.8, 0.95]), motion_blur=False,
                  seed=0)
    pose = CameraPose(position=np.zeros(3), roll=0.0, pitch=0.0, yaw=0.0,
                      intrinsics=Intrinsics.default())
    return scene, pose
