// Stable per-asset colors: keyed to the label text so every view (and every
// reload) paints the same asset the same way.

export function colorForLabel(label: string): string {
  let hash = 0x811c9dc5;
  for (let i = 0; i < label.length; i += 1) {
    hash ^= label.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  const hue = hash % 360;
  return `hsl(${hue},62%,48%)`;
}
