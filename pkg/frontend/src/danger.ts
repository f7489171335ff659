/** Four-step danger meter, green to red. Its whole contract is to show a
 * level and nothing else: no board coordinate ever enters this module, so
 * none can leak out of it. */

export type DangerLevelValue = 0 | 1 | 2 | 3;

const COLORS = ['#22c55e', '#eab308', '#f97316', '#dc2626'];
const LABELS = ['calm', 'watch', 'urgent', 'critical'];

export class DangerMeter {
  private level: DangerLevelValue = 0;

  setLevel(level: DangerLevelValue): void {
    this.level = level;
  }

  currentLevel(): DangerLevelValue {
    return this.level;
  }

  render(): string {
    const cells = [0, 1, 2, 3]
      .map((step) => {
        const lit = step <= this.level && this.level > 0;
        const fill = lit ? COLORS[this.level] : '#e5e7eb';
        return `<span class="meter-cell" style="background:${fill}"></span>`;
      })
      .join('');
    return (
      `<div class="meter meter-level-${this.level}">` +
      `${cells}<span class="meter-label">${LABELS[this.level]}</span></div>`
    );
  }
}
