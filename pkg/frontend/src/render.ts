// Top-down 2D canvas view. Pure function of (scenario, snapshot, controls);
// nothing here mutates game state.

import type { ScenarioDoc, Vec2 } from './protocol';
import type { ViewModel } from './viewmodel';

export interface Camera {
  scale: number; // pixels per meter
  center: Vec2; // world point at the canvas center
}

export function worldToScreen(
  camera: Camera,
  canvas: { width: number; height: number },
  p: Vec2,
): Vec2 {
  return [
    canvas.width / 2 + (p[0] - camera.center[0]) * camera.scale,
    canvas.height / 2 - (p[1] - camera.center[1]) * camera.scale,
  ];
}

export function screenToWorld(
  camera: Camera,
  canvas: { width: number; height: number },
  p: Vec2,
): Vec2 {
  return [
    camera.center[0] + (p[0] - canvas.width / 2) / camera.scale,
    camera.center[1] - (p[1] - canvas.height / 2) / camera.scale,
  ];
}

export function fitCamera(scenario: ScenarioDoc, canvas: { width: number; height: number }): Camera {
  const xs: number[] = [scenario.user_spawn[0], scenario.evacuation.exit.pos[0]];
  const ys: number[] = [scenario.user_spawn[1], scenario.evacuation.exit.pos[1]];
  for (const obj of scenario.objects) {
    xs.push(obj.pos[0]);
    ys.push(obj.pos[1]);
  }
  for (const wp of scenario.evacuation.waypoints) {
    xs.push(wp.pos[0]);
    ys.push(wp.pos[1]);
  }
  const minX = Math.min(...xs) - 2;
  const maxX = Math.max(...xs) + 2;
  const minY = Math.min(...ys) - 2;
  const maxY = Math.max(...ys) + 2;
  const scale = Math.min(canvas.width / (maxX - minX), canvas.height / (maxY - minY));
  return { scale, center: [(minX + maxX) / 2, (minY + maxY) / 2] };
}

const CLASS_COLORS: Record<string, string> = {
  normal: '#a07040',
  electrical: '#4070c0',
  chemical: '#40a060',
};

export function drawScene(
  ctx: CanvasRenderingContext2D,
  camera: Camera,
  vm: ViewModel,
): void {
  const canvas = ctx.canvas;
  const scenario = vm.scenario;
  const snap = vm.snapshot;
  ctx.fillStyle = '#181c20';
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  if (scenario === null) return;

  const toScreen = (p: Vec2) => worldToScreen(camera, canvas, p);

  // evacuation route
  for (const [i, wp] of scenario.evacuation.waypoints.entries()) {
    const visited = snap !== null && i < snap.visited_waypoints;
    drawCircle(ctx, toScreen(wp.pos), wp.r_m * camera.scale,
      visited ? '#3f6' : '#345', true);
  }
  drawCircle(ctx, toScreen(scenario.evacuation.exit.pos),
    scenario.evacuation.exit.r_m * camera.scale, '#2a4', true);

  // objects with intensity-scaled fire glyphs
  for (const obj of scenario.objects) {
    const [sx, sy] = toScreen(obj.pos);
    ctx.fillStyle = CLASS_COLORS[obj.class] ?? '#888';
    ctx.fillRect(sx - 8, sy - 8, 16, 16);
    const level = vm.fireLevel(obj.id);
    if (level !== null && level.phase === 'burning') {
      const r = (0.3 + level.fraction * 0.7) * obj.base_radius_m * camera.scale * 2;
      drawCircle(ctx, [sx, sy], r, 'rgba(255,120,20,0.8)', false);
    }
    if (level !== null && level.phase === 'extinguished') {
      drawCircle(ctx, [sx, sy], 6, 'rgba(120,120,120,0.8)', false);
    }
  }

  // avatar and aim line
  if (snap !== null) {
    const [ux, uy] = toScreen(snap.user_pos);
    const aim = vm.aimVector();
    ctx.strokeStyle = '#ddd';
    ctx.beginPath();
    ctx.moveTo(ux, uy);
    ctx.lineTo(ux + aim[0] * 40, uy - aim[1] * 40);
    ctx.stroke();
    drawCircle(ctx, [ux, uy], 7, '#eee', false);
  }
}

function drawCircle(
  ctx: CanvasRenderingContext2D,
  center: Vec2,
  radius: number,
  color: string,
  outline: boolean,
): void {
  ctx.beginPath();
  ctx.arc(center[0], center[1], Math.max(1, radius), 0, Math.PI * 2);
  if (outline) {
    ctx.strokeStyle = color;
    ctx.stroke();
  } else {
    ctx.fillStyle = color;
    ctx.fill();
  }
}
