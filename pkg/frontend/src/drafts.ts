/**
 * Local persistence of partially entered answers, so nothing typed is lost
 * to navigation or a transient API failure.
 */

export interface AnswerDraft {
  previsions: string[];
  variance: string;
  prior: string;
}

interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

class MemoryStorage implements StorageLike {
  private readonly map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}

function defaultStorage(): StorageLike {
  try {
    if (typeof localStorage !== 'undefined') {
      const probe = '__pba_probe__';
      localStorage.setItem(probe, '1');
      localStorage.removeItem(probe);
      return localStorage;
    }
  } catch {
    // storage blocked; fall through to memory
  }
  return new MemoryStorage();
}

export class DraftStore {
  constructor(private readonly storage: StorageLike = defaultStorage()) {}

  private key(sessionId: string, variable: string): string {
    return `pba-draft:${sessionId}:${variable}`;
  }

  save(sessionId: string, variable: string, draft: AnswerDraft): void {
    this.storage.setItem(this.key(sessionId, variable), JSON.stringify(draft));
  }

  load(sessionId: string, variable: string): AnswerDraft | null {
    const raw = this.storage.getItem(this.key(sessionId, variable));
    if (raw === null) return null;
    try {
      return JSON.parse(raw) as AnswerDraft;
    } catch {
      return null;
    }
  }

  clear(sessionId: string, variable: string): void {
    this.storage.removeItem(this.key(sessionId, variable));
  }
}
