// Browser entry point: wires keyboard/mouse into the view model, speaks the
// WebSocket protocol, renders the scene and the final report screen.

import { abortMessage, helloMessage, startMessage } from './protocol';
import { ViewModel } from './viewmodel';
import { drawScene, fitCamera, screenToWorld, type Camera } from './render';
import { renderReportScreen } from './report';

const INPUT_INTERVAL_MS = 50; // matches the server's 20 Hz tick

const canvas = document.getElementById('scene') as HTMLCanvasElement;
const ctx = canvas.getContext('2d')!;
const urlInput = document.getElementById('server-url') as HTMLInputElement;
const connectButton = document.getElementById('connect') as HTMLButtonElement;
const statusLine = document.getElementById('status') as HTMLElement;
const hud = document.getElementById('hud') as HTMLElement;
const menu = document.getElementById('extinguisher-menu') as HTMLElement;
const reportRoot = document.getElementById('report') as HTMLElement;

const vm = new ViewModel();
let camera: Camera | null = null;
let socket: WebSocket | null = null;
let inputTimer: number | null = null;

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function connect(): void {
  disconnect();
  vm.scenario = null;
  vm.snapshot = null;
  vm.report = null;
  vm.errorText = null;
  reportRoot.hidden = true;
  vm.connection = 'connecting';
  setStatus('connecting…');

  socket = new WebSocket(urlInput.value);
  socket.onopen = () => {
    socket!.send(helloMessage());
  };
  socket.onmessage = (event) => {
    const msg = vm.handleServerText(String(event.data));
    if (msg.kind === 'hello') {
      vm.connection = 'open';
      camera = fitCamera(msg.scenario, canvas);
      buildMenu();
      socket!.send(startMessage());
      startInputLoop();
      setStatus(`scenario ${msg.scenario.id}: extinguish all fires, then evacuate`);
    } else if (msg.kind === 'report') {
      stopInputLoop();
      reportRoot.hidden = false;
      renderReportScreen(msg.report, reportRoot);
      setStatus('session over');
    } else if (msg.kind === 'error') {
      setStatus(`server error: ${msg.error}`);
    }
  };
  socket.onclose = () => {
    stopInputLoop();
    if (vm.connection !== 'error' && !vm.sessionOver()) {
      vm.connection = 'closed';
      setStatus('disconnected — press Connect to retry');
    }
  };
  socket.onerror = () => {
    vm.connection = 'error';
    setStatus('connection failed — check the server URL and retry');
  };
}

function disconnect(): void {
  stopInputLoop();
  if (socket !== null && socket.readyState === WebSocket.OPEN) {
    socket.send(abortMessage());
    socket.close();
  }
  socket = null;
}

function startInputLoop(): void {
  stopInputLoop();
  inputTimer = window.setInterval(() => {
    if (socket !== null && socket.readyState === WebSocket.OPEN && !vm.sessionOver()) {
      socket.send(vm.buildInput());
    }
  }, INPUT_INTERVAL_MS);
}

function stopInputLoop(): void {
  if (inputTimer !== null) {
    window.clearInterval(inputTimer);
    inputTimer = null;
  }
}

function buildMenu(): void {
  menu.innerHTML = '';
  if (vm.scenario === null) return;
  vm.scenario.extinguishers.forEach((ext, i) => {
    const button = document.createElement('button');
    button.textContent = `${i + 1}: ${ext.id} (${ext.kind})`;
    button.onclick = () => vm.selectExtinguisher(i);
    menu.appendChild(button);
  });
}

const KEYMAP: Record<string, keyof Pick<typeof vm.controls, 'up' | 'down' | 'left' | 'right'>> = {
  KeyW: 'up',
  ArrowUp: 'up',
  KeyS: 'down',
  ArrowDown: 'down',
  KeyA: 'left',
  ArrowLeft: 'left',
  KeyD: 'right',
  ArrowRight: 'right',
};

window.addEventListener('keydown', (ev) => {
  const dir = KEYMAP[ev.code];
  if (dir !== undefined) {
    vm.controls[dir] = true;
    ev.preventDefault();
  }
  if (ev.code.startsWith('Digit')) {
    vm.selectExtinguisher(Number(ev.code.slice(5)) - 1);
  }
});
window.addEventListener('keyup', (ev) => {
  const dir = KEYMAP[ev.code];
  if (dir !== undefined) vm.controls[dir] = false;
});
canvas.addEventListener('mousemove', (ev) => {
  if (camera === null) return;
  const rect = canvas.getBoundingClientRect();
  vm.controls.pointerWorld = screenToWorld(camera, canvas, [
    ev.clientX - rect.left,
    ev.clientY - rect.top,
  ]);
});
canvas.addEventListener('mousedown', () => {
  vm.controls.trigger = true;
});
window.addEventListener('mouseup', () => {
  vm.controls.trigger = false;
});
connectButton.addEventListener('click', connect);

function renderHud(): void {
  if (vm.scenario === null || vm.snapshot === null) {
    hud.textContent = '';
    return;
  }
  const lines: string[] = [`t = ${vm.snapshot.time_s.toFixed(1)} s`];
  lines.push(`extinguisher: ${vm.snapshot.selected ?? 'none'}`);
  if (vm.wrongExtinguisherWarning()) {
    lines.push('⚠ wrong extinguisher for this fire');
  }
  for (const fire of vm.snapshot.fires) {
    if (fire.phase === 'unlit') continue;
    const bar = '█'.repeat(Math.round((fire.intensity / fire.max) * 20));
    lines.push(`${fire.id}: ${fire.phase === 'burning' ? bar : 'out'}`);
  }
  lines.push(`waypoints: ${vm.snapshot.visited_waypoints}/${vm.scenario.evacuation.waypoints.length}`);
  hud.textContent = lines.join('\n');
}

function frame(): void {
  if (camera !== null) {
    drawScene(ctx, camera, vm);
  }
  renderHud();
  requestAnimationFrame(frame);
}
requestAnimationFrame(frame);
