// End-of-session report screen content. Values are shown verbatim from the
// payload; missing fields degrade to placeholders rather than crashing.

import type { ReportPayload } from './protocol';

export interface ReportRow {
  label: string;
  value: string;
  badge?: 'dnf' | 'success' | 'warn';
}

const MISSING = '—';

const seconds = (v: number | null | undefined): string =>
  v === null || v === undefined || !Number.isFinite(v) ? MISSING : `${v.toFixed(2)} s`;

const fraction = (v: number | undefined): string =>
  v === undefined || !Number.isFinite(v) ? MISSING : `${(v * 100).toFixed(1)}%`;

export function reportRows(report: ReportPayload): ReportRow[] {
  const rows: ReportRow[] = [];

  const dnf = report.dnf === true || report.outcome === 'timeout';
  rows.push({
    label: 'Outcome',
    value: dnf ? 'DNF' : report.outcome ?? MISSING,
    badge: dnf ? 'dnf' : report.outcome === 'success' ? 'success' : undefined,
  });
  rows.push({ label: 'Time taken', value: dnf ? 'DNF' : seconds(report.time_taken_s) });

  if (report.response_time_s === null) {
    rows.push({ label: 'Response time', value: 'no spray', badge: 'warn' });
  } else {
    rows.push({ label: 'Response time', value: seconds(report.response_time_s) });
  }

  rows.push({
    label: 'Aiming score',
    value:
      report.aiming_score_pct === undefined || !Number.isFinite(report.aiming_score_pct)
        ? MISSING
        : `${report.aiming_score_pct.toFixed(1)}%`,
  });
  rows.push({ label: 'Correct extinguisher usage', value: fraction(report.correct_usage) });
  rows.push({ label: 'Evacuation completion', value: fraction(report.evacuation_completion) });
  rows.push({ label: 'Overall', value: fraction(report.overall) });

  for (const fire of report.per_fire ?? []) {
    rows.push({
      label: `Fire: ${fire.id}`,
      value:
        fire.extinguished_at_s === null
          ? 'not extinguished'
          : seconds(fire.extinguished_at_s),
    });
  }
  return rows;
}

export function renderReportScreen(report: ReportPayload, root: HTMLElement): void {
  root.innerHTML = '';
  const heading = document.createElement('h2');
  heading.textContent = 'Session report';
  root.appendChild(heading);
  const table = document.createElement('table');
  for (const row of reportRows(report)) {
    const tr = document.createElement('tr');
    const labelCell = document.createElement('td');
    labelCell.textContent = row.label;
    const valueCell = document.createElement('td');
    valueCell.textContent = row.value;
    if (row.badge !== undefined) {
      valueCell.className = `badge-${row.badge}`;
    }
    tr.append(labelCell, valueCell);
    table.appendChild(tr);
  }
  root.appendChild(table);
}
