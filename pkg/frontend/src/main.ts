import { ApiClient } from './api.js';
import { App } from './app.js';

document.addEventListener('DOMContentLoaded', () => {
    const root = document.getElementById('app');
    if (root === null) {
        throw new Error('missing #app element; check index.html');
    }
    new App(root, new ApiClient());
});
